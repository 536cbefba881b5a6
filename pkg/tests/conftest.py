import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from goldflat.qfield import FieldElement

settings.register_profile("goldflat", max_examples=200, deadline=None)
settings.load_profile("goldflat")


def pytest_terminal_summary(terminalreporter):
    # one PASS/FAIL line per acceptance criterion, in the order they ran
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
positive_fractions = st.fractions(min_value=Fraction(1, 8), max_value=6, max_denominator=8)


@st.composite
def elements(draw, D=5, rationals=small_fractions):
    return FieldElement(draw(rationals), draw(rationals), D)


@st.composite
def positive_elements(draw, D=5):
    # a + b*sqrt(D) with a > 0 and |b| small enough that the value stays positive
    a = draw(positive_fractions)
    b = draw(st.fractions(min_value=0, max_value=2, max_denominator=6))
    return FieldElement(a, b, D)


# -- rectangle-tiled surfaces ---------------------------------------------------------------------
#
# Rectangle i has right neighbour r[i] and upper neighbour u[i].  Rectangles in
# one cycle of r share a height, rectangles in one cycle of u share a width, so
# every horizontal cylinder is a cycle of r with known circumference and height.


def cycles(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


class Tiling:
    def __init__(self, r, u, widths, heights):
        self.r, self.u = list(r), list(u)
        self.rows = cycles(self.r)
        self.cols = cycles(self.u)
        self.width = {i: widths[k] for k, col in enumerate(self.cols) for i in col}
        self.height = {i: heights[k] for k, row in enumerate(self.rows) for i in row}

    def surface(self, marked=()):
        from goldflat.linalg import vec
        from goldflat.surface import build_surface

        polys, pairs = [], {}
        for i in range(len(self.r)):
            w, h = self.width[i], self.height[i]
            polys.append([vec(w, 0), vec(0, h), vec(-w, 0), vec(0, -h)])
            pairs[(i, 1)] = (self.r[i], 3)
            pairs[(i, 2)] = (self.u[i], 0)
        return build_surface(polys, pairs, marked)

    def row_cylinders(self):
        return sorted((sum(self.width[i] for i in row), self.height[row[0]]) for row in self.rows)

    def area(self):
        return sum(self.width[i] * self.height[i] for i in range(len(self.r)))

    def euler_characteristic_components(self):
        # union-find over rectangles, independent of the library
        parent = list(range(len(self.r)))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for i in range(len(self.r)):
            for j in (self.r[i], self.u[i]):
                parent[find(i)] = find(j)
        return len({find(i) for i in range(len(self.r))})

    def commutator_orders(self):
        # cone angle at the lower-left corner orbit = length of the cycle of r u r^-1 u^-1
        n = len(self.r)
        rinv = [0] * n
        uinv = [0] * n
        for i in range(n):
            rinv[self.r[i]] = i
            uinv[self.u[i]] = i
        comm = [self.r[self.u[rinv[uinv[i]]]] for i in range(n)]
        return sorted((len(c) - 1 for c in cycles(comm)), reverse=True)


field_lengths = st.sampled_from(["1", "2", "1/2", "1/2 + 1/2*rt(5)", "-1/2 + 1/2*rt(5)", "3/2 + 1/2*rt(5)", "rt(5)"])


@st.composite
def tilings(draw, max_tiles=5, connected=True):
    from goldflat.qfield import parse_literal

    n = draw(st.integers(min_value=1, max_value=max_tiles))
    r = draw(st.permutations(range(n)))
    u = draw(st.permutations(range(n)))
    t0 = Tiling(r, u, [1] * n, [1] * n)
    if connected and t0.euler_characteristic_components() != 1:
        # join everything into one row so the tiling is connected
        r = list(range(1, n)) + [0]
        t0 = Tiling(r, u, [1] * n, [1] * n)
    widths = [parse_literal(draw(field_lengths)) for _ in t0.cols]
    heights = [parse_literal(draw(field_lengths)) for _ in t0.rows]
    return Tiling(r, u, widths, heights)


def _matrix(entries):
    from goldflat.linalg import Matrix2

    return Matrix2.of(*entries)


def matrices():
    from goldflat.qfield import PHI

    entry = st.sampled_from([0, 1, -1, 2, PHI, PHI - 1, -PHI])
    return st.tuples(entry, entry, entry, entry).map(_matrix).filter(lambda m: m.det() != 0)
