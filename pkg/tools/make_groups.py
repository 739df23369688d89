"""Regenerate the bundled group files in src/pgtyped/data.

Every file is derived here from a construction that can be checked by hand:

* M11, M12, M22, M23, M24: the classical generators on 11/12/22/23/24 points
  (as shipped by GAP's ``MathieuGroup``).
* L5(2): GL(5,2) acting on the 31 nonzero vectors of GF(2)^5, generated by a
  Singer cycle (multiplication by x in GF(32) = GF(2)[x]/(x^5+x^2+1)) and one
  transvection.  Point ``v`` is the integer with binary expansion ``v``.
* S6(2): Sp(6,2) acting on the 28 quadratic forms of minus type that polarize
  to the standard symplectic form.  The group is generated by all symplectic
  transvections; the file stores two random elements that generate it.

The expected order in each header is enforced when the file is loaded.

Usage: python tools/make_groups.py
"""

from __future__ import annotations

from pathlib import Path

from pgtyped.group import RandomSource, group_from_generators, random_element
from pgtyped.perm import Permutation, parse_perm

OUT = Path(__file__).resolve().parents[1] / "src" / "pgtyped" / "data"

MATHIEU = {
    "M11": (11, 7920, [
        "(1,2,3,4,5,6,7,8,9,10,11)",
        "(3,7,11,8)(4,10,5,6)",
    ]),
    "M12": (12, 95040, [
        "(1,2,3,4,5,6,7,8,9,10,11)",
        "(3,7,11,8)(4,10,5,6)",
        "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)",
    ]),
    "M22": (22, 443520, [
        "(1,2,3,4,5,6,7,8,9,10,11)(12,13,14,15,16,17,18,19,20,21,22)",
        "(1,4,5,9,3)(2,8,10,7,6)(12,15,16,20,14)(13,19,21,18,17)",
        "(1,21)(2,10,8,6)(3,13,4,17)(5,19,9,18)(11,22)(12,14,16,20)",
    ]),
    "M23": (23, 10200960, [
        "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
        "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
    ]),
    "M24": (24, 244823040, [
        "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
        "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
        "(1,24)(2,23)(3,12)(4,16)(5,18)(6,10)(7,20)(8,14)(9,21)(11,17)(13,22)(15,19)",
    ]),
}


def l5_2():
    def singer(v):
        v <<= 1
        if v & 0b100000:
            v ^= 0b100101
        return v

    def transvection(v):
        # v -> v + (bit 4 of v) * e0
        return v ^ 1 if v & 0b10000 else v

    gens = []
    for f in (singer, transvection):
        gens.append(Permutation([f(v) - 1 for v in range(1, 32)]))
    return 31, 9999360, gens


def s6_2():
    vecs = list(range(64))

    def bit(x, i):
        return (x >> i) & 1

    def B(x, y):
        return sum(bit(x, 2 * k) * bit(y, 2 * k + 1) + bit(x, 2 * k + 1) * bit(y, 2 * k)
                   for k in range(3)) % 2

    def Q0(x):
        return sum(bit(x, 2 * k) * bit(x, 2 * k + 1) for k in range(3)) % 2

    # Q_a(x) = Q0(x) + B(a, x); minus type iff Q0(a) = 1
    forms = {}
    for a in vecs:
        if Q0(a) == 1:
            forms[tuple((Q0(x) + B(a, x)) % 2 for x in vecs)] = len(forms)
    assert len(forms) == 28
    tables = sorted(forms, key=forms.get)

    gens = []
    for v in range(1, 64):
        def T(x, v=v):
            return x ^ v if B(x, v) else x
        img = []
        for tab in tables:
            new = tuple(tab[T(x)] for x in vecs)
            img.append(forms[new])
        gens.append(Permutation(img))
    G = group_from_generators(gens)
    assert G.order == 1451520, G.order
    rs = RandomSource(11)
    while True:
        a, b = random_element(G, rs), random_element(G, rs)
        if group_from_generators([a, b]).order == G.order:
            return 28, G.order, [a, b]


def write(name, degree, order, gens, note):
    lines = [f"# {name}", f"# {note}", f"degree {degree} order {order}"]
    lines += [str(g) for g in gens]
    path = OUT / f"{name}.grp"
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path.name}")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (deg, order, gens) in MATHIEU.items():
        perms = [parse_perm(g, deg) for g in gens]
        G = group_from_generators(perms)
        assert G.order == order, (name, G.order)
        write(name, deg, order, perms, f"standard generators of {name} on {deg} points")
    deg, order, gens = l5_2()
    assert group_from_generators(gens).order == order
    write("L5(2)", deg, order, gens,
          "GL(5,2) on nonzero vectors of GF(2)^5: Singer cycle and a transvection")
    deg, order, gens = s6_2()
    write("S6(2)", deg, order, gens,
          "Sp(6,2) on the 28 minus-type quadratic forms of the standard symplectic form")


if __name__ == "__main__":
    main()
