"""Monomial ideals as staircases, checked against a brute-force box.

Run: python demos/01_staircases.py
"""
from starforge.staircase import Box, Staircase, colon, inverse, oracle, product, restrict, v_closure
from starforge.values import ValueGroup


def show(title, I):
    print(f"  {title:<28} {I}")


def main():
    print("1. Two variables over a field: values live in N^2, ordered componentwise.")
    N2 = ValueGroup.nn(2)
    I = Staircase(N2, [(2, 0), (0, 2)])   # (X^2, Y^2)
    M = Staircase(N2, [(1, 0), (0, 1)])   # (X, Y)
    show("I = (X^2, Y^2)", I)
    show("M = (X, Y)", M)
    show("I M", product(I, M))
    show("(I : M)", colon(I, M))
    show("I^-1 = (D : I)", inverse(I))
    show("I^v = (D : I^-1)", v_closure(I))
    print("   I^-1 = D, so I^v = D: a two-generated ideal that is 'divisorially trivial'.")

    print("\n2. The same closure, recomputed point by point inside a box of radius 4.")
    box = Box.radius(2, 4)
    lib = restrict(v_closure(I), box)
    brute = oracle("v_closure", [I], box)
    print(f"   {box.size} lattice points; library and oracle agree: {lib == brute}")

    print("\n3. A numerical semigroup ring k[[t^2, t^3]]: the gap at 1 matters.")
    S = ValueGroup.semigroup([2, 3])
    m = Staircase(S, [(2,), (3,)])
    show("m = (t^2, t^3)", m)
    show("(m : m)", colon(m, m))
    show("m^v", v_closure(m))
    print(f"   gaps {sorted(S.gaps)}, Frobenius number {S.frobenius}; (m : m) gains t, which is outside D.")

    print("\n4. A rank-two valuation: values in Z^2 with the lexicographic order.")
    L = ValueGroup.lex(2)
    J = Staircase(L, [(0, 3), (1, -4)])
    show("J = (a, b)", J)
    print("   every finitely generated ideal is principal, generated by the smaller value.")


if __name__ == "__main__":
    main()
