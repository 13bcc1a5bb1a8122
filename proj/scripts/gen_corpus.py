#!/usr/bin/env python3
"""Generate the built-in Cayley table corpus under data/ and test fixtures
under tests/data/.  Every emitted table is validated (Latin square + identity)."""

import os
import itertools

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def check_table(t):
    n = len(t)
    syms = sorted(set(t[0]))
    assert len(syms) == n
    for r in t:
        assert sorted(r) == syms, "row not a permutation"
    for j in range(n):
        assert sorted(t[i][j] for i in range(n)) == syms, "column not a permutation"
    # identity under the label-rank convention: row r and column r both list
    # the labels in ascending order
    found = None
    for r in range(n):
        if all(t[r][k] == syms[k] and t[k][r] == syms[k] for k in range(n)):
            found = r
            break
    assert found is not None, "no identity"
    return found


def is_assoc(t, lab_to_idx):
    n = len(t)
    m = lambda a, b: lab_to_idx[t[a][b]]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if t[m(a, b)][c] != t[a][m(b, c)]:
                    return False
    return True


def table_from_mul(n, mul):
    """mul: (i,j)->k on 0..n-1, identity 0.  Labels 1..n."""
    return [[mul(i, j) + 1 for j in range(n)] for i in range(n)]


def zn(n):
    return table_from_mul(n, lambda i, j: (i + j) % n)


def d4():
    # r^a s^b, index a + 4b
    def mul(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        if b == 0:
            return (a + c) % 4 + 4 * d
        return (a - c) % 4 + 4 * ((1 + d) % 2 if d == 0 else 0)
    # simpler: s^b with b in {0,1}: r^a s^b * r^c s^d = r^{a + (-1)^b c} s^{b^d}
    def mul2(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        e = (a + (c if b == 0 else -c)) % 4
        return e + 4 * (b ^ d)
    return table_from_mul(8, mul2)


def q8():
    # order: 1, -1, i, -i, j, -j, k, -k ; element = (sign, unit) unit in 0..3 = 1,i,j,k
    order = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    idx = {e: i for i, e in enumerate(order)}
    # unit multiplication table: u*v = (sign, unit)
    um = {}
    for u in range(4):
        um[(0, u)] = (1, u)
        um[(u, 0)] = (1, u)
    um[(1, 1)] = (-1, 0)
    um[(2, 2)] = (-1, 0)
    um[(3, 3)] = (-1, 0)
    um[(1, 2)] = (1, 3)
    um[(2, 1)] = (-1, 3)
    um[(2, 3)] = (1, 1)
    um[(3, 2)] = (-1, 1)
    um[(3, 1)] = (1, 2)
    um[(1, 3)] = (-1, 2)

    def mul(x, y):
        sx, ux = order[x]
        sy, uy = order[y]
        s, u = um[(ux, uy)]
        return idx[(sx * sy * s, u)]
    return table_from_mul(8, mul)


def s3():
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    idx = {p: i for i, p in enumerate(perms)}

    def mul(x, y):
        f, g = perms[x], perms[y]
        return idx[tuple(f[g[i]] for i in range(3))]
    return table_from_mul(6, mul)


def product(t1, t2):
    n1, n2 = len(t1), len(t2)
    l2i1 = {t1[0][j]: j for j in range(n1)}
    l2i2 = {t2[0][j]: j for j in range(n2)}
    # identity-first tables with labels 1..n: row 0 is the header
    def mul(x, y):
        a1, a2 = x // n2, x % n2
        b1, b2 = y // n2, y % n2
        c1 = l2i1[t1[a1][b1]]
        c2 = l2i2[t2[a2][b2]]
        return c1 * n2 + c2
    return table_from_mul(n1 * n2, mul)


EX6 = [
    [1, 2, 3, 4, 5, 6],
    [2, 1, 4, 3, 6, 5],
    [3, 4, 5, 6, 1, 2],
    [4, 3, 6, 5, 2, 1],
    [5, 6, 2, 1, 3, 4],
    [6, 5, 1, 2, 4, 3],
]

NS5 = [
    [1, 2, 3, 4, 5],
    [2, 1, 4, 5, 3],
    [3, 4, 5, 1, 2],
    [4, 5, 2, 3, 1],
    [5, 3, 1, 2, 4],
]


def emit(path, name, table, comment=None):
    check_table(table)
    with open(path, "w") as f:
        f.write(f"# {name}\n")
        if comment:
            f.write(f"# {comment}\n")
        f.write(f"{len(table)}\n")
        w = max(len(str(x)) for r in table for x in r)
        for r in table:
            f.write(" ".join(str(x).rjust(w) for x in r) + "\n")
    print("wrote", path, "n =", len(table))


def main():
    data = os.path.join(ROOT, "data")
    tdata = os.path.join(ROOT, "tests", "data")
    os.makedirs(data, exist_ok=True)
    os.makedirs(tdata, exist_ok=True)

    for n in range(2, 9):
        emit(os.path.join(data, f"z{n}.txt"), f"cyclic group of order {n}", zn(n))
    emit(os.path.join(data, "z12.txt"), "cyclic group of order 12", zn(12))
    emit(os.path.join(data, "z2xz2.txt"), "Klein four-group", product(zn(2), zn(2)))
    emit(os.path.join(data, "s3.txt"), "symmetric group S3", s3())
    emit(os.path.join(data, "d4.txt"), "dihedral group of order 8", d4())
    emit(os.path.join(data, "q8.txt"), "quaternion group", q8())
    emit(os.path.join(data, "z3xd4.txt"), "direct product Z3 x D4", product(zn(3), d4()))
    emit(os.path.join(data, "ex6.txt"),
         "order-6 loop: centrally nilpotent of class 2, directly indecomposable",
         EX6)

    # -- test fixtures --
    emit(os.path.join(tdata, "ns5.txt"), "non-associative loop of order 5", NS5)

    # Z4 with the identity carrying the largest label: rows are in label
    # order, so the identity is the fourth input element
    relabel = {0: 4, 1: 1, 2: 2, 3: 3}  # z4 element -> label
    elem_of_row = [1, 2, 3, 0]          # rows sorted by label
    shifted = [[relabel[(elem_of_row[i] + elem_of_row[j]) % 4] for j in range(4)]
               for i in range(4)]
    emit(os.path.join(tdata, "z4_shifted.txt"), "Z4, identity labeled 4", shifted)

    # multi-table file: Z2, S3, Z4 separated by blank lines
    with open(os.path.join(tdata, "multi3.txt"), "w") as f:
        for name, t in [("Z2", zn(2)), ("S3", s3()), ("Z4", zn(4))]:
            f.write(f"# {name}\n{len(t)}\n")
            for r in t:
                f.write(" ".join(map(str, r)) + "\n")
            f.write("\n")
    print("wrote multi3.txt")

    with open(os.path.join(tdata, "bad_latin.txt"), "w") as f:
        f.write("2\n1 2\n1 1\n")
    with open(os.path.join(tdata, "no_identity.txt"), "w") as f:
        # Latin square of order 3 with a left identity but no right identity
        f.write("3\n1 2 3\n3 1 2\n2 3 1\n")
    with open(os.path.join(tdata, "empty.txt"), "w") as f:
        f.write("")
    with open(os.path.join(tdata, "malformed.txt"), "w") as f:
        f.write("3\n1 2 3\n2 x 1\n3 1 2\n")
    print("wrote fixtures")

    # sanity: associativity expectations
    assert is_assoc(zn(6), {v: i for i, v in enumerate(zn(6)[0])})
    assert not is_assoc(EX6, {v: i for i, v in enumerate(EX6[0])})
    assert not is_assoc(NS5, {v: i for i, v in enumerate(NS5[0])})
    assert is_assoc(d4(), {v: i for i, v in enumerate(d4()[0])})
    assert is_assoc(q8(), {v: i for i, v in enumerate(q8()[0])})
    print("sanity OK")


if __name__ == "__main__":
    main()
