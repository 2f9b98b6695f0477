"""Independent derivation of the closed-form values frozen in the C++ tests.

Run: python3 tests/oracles/foldfold_oracle.py
"""

import numpy as np
import sympy as sp

a, b, g, x, y, t = sp.symbols("alpha beta gamma x y t", real=True)


def flow_return(field, q):
    """Nonzero return time to z = 0 of a polynomial field with affine flow in (x, y)."""
    x0, y0 = q
    # fields here have constant planar part, so the flow is explicit
    px, py, pz = field
    xt = x0 + px * t
    yt = y0 + py * t
    zt = sp.integrate(pz.subs({x: xt, y: yt}).subs(t, sp.Symbol("s")), (sp.Symbol("s"), 0, t))
    roots = [r for r in sp.solve(sp.expand(zt / t), t)]
    assert len(roots) == 1
    tr = roots[0]
    return sp.simplify(xt.subs(t, tr)), sp.simplify(yt.subs(t, tr))


def main():
    # Elliptic normal form X = (alpha, 1, -y), Y = (gamma, beta, x).
    phx = flow_return((a, sp.Integer(1), -y), (x, y))
    phy = flow_return((g, b, x), (x, y))
    print("phi_X =", phx)
    print("phi_Y =", phy)
    AX = sp.Matrix([[sp.diff(c, v) for v in (x, y)] for c in phx])
    AY = sp.Matrix([[sp.diff(c, v) for v in (x, y)] for c in phy])
    M = sp.simplify(AX * AY)
    print("A_X A_Y =", M.tolist(), "det =", sp.simplify(M.det()))

    for p in [(-1, -1, sp.Rational(1, 2)), (1, 1, 2), (-1, -1, 1), (-2, -1, 1), (2, 2, 1)]:
        m = np.array(M.subs({a: p[0], b: p[1], g: p[2]}).tolist(), dtype=float)
        w, v = np.linalg.eig(m)
        order = np.argsort(np.abs(w))
        print(p, "matrix", m.tolist(), "eig", w[order])
        if np.all(np.isreal(w)) and abs(abs(w[0]) - 1) > 1e-9:
            for k in order:
                vec = np.real(v[:, k])
                print("   eigenvalue %.15g slope %.15g" % (np.real(w[k]), vec[1] / vec[0]))
        else:
            print("   tau =", np.angle(w[order][0]) if np.imag(w[order][0]) > 0 else np.angle(w[order][1]))

    # Invisible-visible chart (delta = -1, gamma < 0): F^N linear part.
    L = sp.Matrix([[a, g], [1, b]])
    q = sp.Matrix([x, y])
    A = AX
    F0 = L * q
    F1 = A * L * A * q
    D = sp.factor(sp.expand(F0[0] * F1[1] - F0[1] * F1[0]))
    print("D =", D)
    w = sp.Matrix(phx).subs(x, 0)
    dw = sp.diff(w, y)
    T = sp.factor(sp.expand((L * w).dot(sp.Matrix([-dw[1], dw[0]]))))
    print("T =", T)
    for p in [(1, 1, -1), (1, -1, -1), (-1, sp.Rational(3, 2), -1)]:
        s = {a: p[0], b: p[1], g: p[2]}
        print(p, "D/y^2 =", sp.simplify(D.subs(s) / y**2), "T/y =", sp.simplify(T.subs(s) / y))

    # Extraction of the (-1, -1, 1/2, -1) form: alpha = XYf / sqrt(|X^2f||Y^2f|).
    print("extracted alpha =", sp.nsimplify(-1 / sp.sqrt(sp.Rational(1, 2))))


if __name__ == "__main__":
    main()
