"""Deciding and constructing hyperbolic lattice-preserving automorphisms.

A graph's k-step nilmanifold admits an Anosov automorphism iff every
coherent class has at least two vertices and no class of size 2..k is
internally complete.  When the criterion holds, the constructive route is
followed: one unimodular integer matrix per class whose r-fold eigenvalue
products avoid the unit circle for r <= min(k, class size - 1), per-class
exponents escalated over a deterministic ladder, and the resulting
degree-one map extended through the graded algebra.  Instead of the
eigenvalue bookkeeping that picks exponents in the existence proof, every
degree block is verified directly: integral, determinant +-1, and a
certified unit-root-free characteristic polynomial.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .graphs import coherent_components
from .liealg import quotient_algebra
from .lyndon import free_bracket_words, standard_factorization
from .spectra import char_poly, products_off_circle, unit_root_free


class NotAdmissibleError(RuntimeError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__("graph does not admit an Anosov automorphism at this step")


class ComponentSearchExhausted(RuntimeError):
    pass


class LadderExhaustedError(RuntimeError):
    pass


class ExtensionError(ValueError):
    """The degree-one map does not descend to the quotient algebra."""


@dataclass(frozen=True)
class Violation:
    class_index: int
    reason: str  # "singleton-class" | "internal-edge-in-small-class"
    offending_edge: tuple | None = None

    def to_json(self):
        out = {"class_index": self.class_index, "reason": self.reason}
        if self.offending_edge is not None:
            out["offending_edge"] = list(self.offending_edge)
        return out


@dataclass(frozen=True)
class AnosovVerdict:
    k: int
    admits: bool
    violations: tuple

    def to_json(self):
        return {
            "k": self.k,
            "admits": self.admits,
            "violations": [v.to_json() for v in self.violations],
        }


def decide_anosov(partition, k):
    """Evaluate the admissibility criterion on a coherent partition."""
    if k < 2:
        raise ValueError("step k must be >= 2")
    g = partition.graph
    violations = []
    for ci, cls in enumerate(partition.classes):
        if len(cls) < 2:
            violations.append(Violation(ci, "singleton-class"))
            continue
        if 2 <= len(cls) <= k and partition.internal_edges[ci]:
            u, v = partition.internal_edges[ci][0]
            violations.append(Violation(
                ci, "internal-edge-in-small-class",
                offending_edge=(g.vertices[u], g.vertices[v]),
            ))
    return AnosovVerdict(k=k, admits=not violations, violations=tuple(violations))


# -- per-class component matrices -------------------------------------------


def companion_matrix(poly):
    """Companion matrix of a monic integer polynomial."""
    d = poly.degree
    assert poly.leading() == 1
    m = [[0] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = 1
    for i in range(d):
        m[i][d - 1] = -poly.coeffs[i]
    return m


def _candidate_polys(d, coeff_bound, seed):
    """Monic degree-d integer polynomials with constant term +-1.

    Deterministic shells of growing coefficient radius first, then a
    seeded random stream drawing beyond the deterministic box.
    """
    from .intpoly import IntPolynomial

    for b in range(coeff_bound + 1):
        for mids in itertools.product(range(-b, b + 1), repeat=d - 1):
            if mids and max(abs(x) for x in mids) != b:
                continue
            if not mids and b > 0:
                continue
            for c0 in (-1, 1):
                # mids holds (a_{d-1}, ..., a_1)
                yield IntPolynomial([c0] + list(reversed(mids)) + [1])
    rng = random.Random(seed)
    wide = 2 * coeff_bound + 1
    while True:
        mids = [rng.randint(-wide, wide) for _ in range(d - 1)]
        c0 = rng.choice((-1, 1))
        yield IntPolynomial([c0] + list(reversed(mids)) + [1])


@dataclass
class ComponentMatrix:
    matrix: list
    poly: object  # IntPolynomial
    products: object  # ProductsCertificate
    dimension: int
    r_max: int
    candidate_index: int

    def to_json(self):
        return {
            "matrix": self.matrix,
            "char_poly": self.poly.to_json(),
            "r_max": self.r_max,
            "candidate_index": self.candidate_index,
            "products": self.products.to_json(),
        }


def find_component_matrix(d, k, coeff_bound=3, seed=0, budget=20000, skip=0):
    """A matrix in GL(d, Z) whose r-fold eigenvalue products avoid the unit
    circle for every r <= min(k, d-1), found by enumerating companion
    matrices in a fixed order.  `skip` asks for a later qualifying hit."""
    if d < 2:
        raise ValueError("component dimension must be >= 2")
    r_max = min(k, d - 1)
    found = 0
    for index, poly in enumerate(_candidate_polys(d, coeff_bound, seed)):
        if index >= budget:
            break
        a = companion_matrix(poly)
        pc = products_off_circle(a, r_max)
        if pc.ok:
            if found == skip:
                return ComponentMatrix(
                    matrix=a, poly=poly, products=pc,
                    dimension=d, r_max=r_max, candidate_index=index,
                )
            found += 1
    raise ComponentSearchExhausted(
        f"no qualifying GL({d},Z) companion within {budget} candidates "
        f"(coefficient box radius {coeff_bound}, seed {seed})"
    )


# -- graded extension --------------------------------------------------------


def _free_bracket_vec(words_a, vec_a, words_b, vec_b):
    out = {}
    for i, ci in enumerate(vec_a):
        if not ci:
            continue
        for j, cj in enumerate(vec_b):
            if not cj:
                continue
            c = ci * cj
            for w, cw in free_bracket_words(words_a[i], words_b[j]).items():
                out[w] = out.get(w, Fraction(0)) + c * cw
    return {w: c for w, c in out.items() if c}


def extend_to_algebra(algebra, g):
    """Degree blocks of the algebra endomorphism induced by a degree-one map.

    The induced free-algebra map is pushed through each degree via standard
    factorizations; it descends iff it maps every defining relation back
    into the relation space, which is checked exactly (block-diagonal maps
    across coherent classes always pass).  Returns {degree: matrix} on the
    algebra's basis, degree 1 included.
    """
    n = len(algebra.generators)
    if len(g) != n or any(len(row) != n for row in g):
        raise ValueError("degree-one matrix has the wrong shape")
    # free induced matrices as column dicts, per degree
    free_cols = {1: {}}
    red1 = algebra.reductions[1]
    for j, w in enumerate(red1.words):
        col = {}
        for i in range(n):
            c = Fraction(g[i][j])
            if c:
                col[red1.words[i]] = col.get(red1.words[i], Fraction(0)) + c
        free_cols[1][w] = col
    for m in range(2, algebra.k + 1):
        red = algebra.reductions[m]
        free_cols[m] = {}
        for w in red.words:
            u, v = standard_factorization(w)
            cu, cv = free_cols[len(u)][u], free_cols[len(v)][v]
            wu = list(cu.keys())
            wv = list(cv.keys())
            img = _free_bracket_vec(wu, [cu[x] for x in wu], wv, [cv[x] for x in wv])
            free_cols[m][w] = img
    # descent: relation generators must land in the relation space
    for deg, rel in algebra.relation_generators:
        red = algebra.reductions[deg]
        img = {}
        for w, c in rel.items():
            for w2, c2 in free_cols[deg][w].items():
                img[w2] = img.get(w2, Fraction(0)) + Fraction(c) * c2
        vec = [Fraction(0)] * red.free_dim
        for w2, c2 in img.items():
            vec[red.col[w2]] += c2
        if not red.contains(vec):
            raise ExtensionError(
                f"degree-one map does not preserve the degree-{deg} relation space"
            )
    blocks = {}
    for m in range(1, algebra.k + 1):
        red = algebra.reductions[m]
        words = algebra.basis_words[m]
        dim = len(words)
        block = [[Fraction(0)] * dim for _ in range(dim)]
        for jcol, w in enumerate(words):
            coords = red.reduce_dict(free_cols[m][w])
            for irow in range(dim):
                block[irow][jcol] = coords[irow]
        blocks[m] = block
    return blocks


# -- synthesis ---------------------------------------------------------------


@dataclass
class SynthesisConfig:
    coeff_bound: int = 3
    max_exponent: int = 64
    seed: int = 0
    budget: int = 100000


_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def _exponent_ladder(num_classes, max_exponent):
    """Per-class prime-power exponent tuples, ordered by total size."""
    options = []
    for c in range(num_classes):
        p = _PRIMES[c % len(_PRIMES)]
        opts = []
        v = 1
        while v <= max_exponent:
            opts.append(v)
            v *= p
        options.append(opts)
    return sorted(itertools.product(*options), key=lambda t: (sum(t), t))


def _scatter_block_diagonal(n, classes, mats):
    """Place per-class matrices at their members' vertex indices."""
    g = [[0] * n for _ in range(n)]
    for cls, a in zip(classes, mats):
        for r, vr in enumerate(cls):
            for c, vc in enumerate(cls):
                g[vr][vc] = a[r][c]
    return g


@dataclass
class AutomorphismCertificate:
    graph_digest: str
    k: int
    classes: list  # per class, list of vertex labels
    components: list  # per class, ComponentMatrix json
    exponents: list
    degree_blocks: dict  # degree -> integer matrix
    char_polys: dict  # degree -> ascending coefficients
    unit_root_certs: dict  # degree -> certificate json
    determinants: dict  # degree -> +-1

    def to_json(self):
        return {
            "schema": 1,
            "graph_digest": self.graph_digest,
            "k": self.k,
            "classes": self.classes,
            "components": self.components,
            "exponents": self.exponents,
            "degree_blocks": {str(m): b for m, b in sorted(self.degree_blocks.items())},
            "char_polys": {str(m): p for m, p in sorted(self.char_polys.items())},
            "unit_root_certs": {str(m): c for m, c in sorted(self.unit_root_certs.items())},
            "determinants": {str(m): d for m, d in sorted(self.determinants.items())},
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            graph_digest=data["graph_digest"],
            k=data["k"],
            classes=data["classes"],
            components=data["components"],
            exponents=data["exponents"],
            degree_blocks={int(m): b for m, b in data["degree_blocks"].items()},
            char_polys={int(m): p for m, p in data["char_polys"].items()},
            unit_root_certs={int(m): c for m, c in data["unit_root_certs"].items()},
            determinants={int(m): d for m, d in data["determinants"].items()},
        )


def _check_blocks(blocks, budget_bits=None):
    """Integrality, unimodularity and unit-root-freeness of degree blocks.

    Returns (True, (char_polys, certs, dets)) or (False, (kind, reason))
    with kind one of "unimodularity" / "unit-root-freeness".
    """
    char_polys, certs, dets = {}, {}, {}
    for m, block in sorted(blocks.items()):
        if not linalg.is_integral(block):
            return False, ("unimodularity", f"degree-{m} block is not integral")
        intblock = [[int(x) for x in row] for row in block]
        det = int(linalg.det_bareiss(intblock)) if intblock else 1
        if det not in (1, -1):
            return False, ("unimodularity",
                           f"degree-{m} block determinant {det} is not a unit")
        cp = char_poly(intblock)
        cert = unit_root_free(cp, budget_bits=budget_bits)
        char_polys[m] = cp
        certs[m] = cert
        dets[m] = det
        if not cert.free:
            return False, ("unit-root-freeness",
                           f"degree-{m} block has a unit-modulus eigenvalue")
    return True, (char_polys, certs, dets)


def synthesize(graph, k, config=None):
    """Construct and certify a hyperbolic lattice-preserving automorphism.

    Per-class component matrices come from the deterministic search, the
    exponent ladder escalates until every degree block passes direct
    certification, and the result is emitted as a self-contained
    certificate.  The config budget caps the total number of component
    candidates and ladder rungs examined.
    """
    config = config or SynthesisConfig()
    partition = coherent_components(graph)
    verdict = decide_anosov(partition, k)
    if not verdict.admits:
        raise NotAdmissibleError(verdict)
    algebra = quotient_algebra(graph, k)
    ladder = _exponent_ladder(len(partition.classes), config.max_exponent)
    spent = 0
    last_failure = None
    for round_idx in range(3):
        try:
            components = {}
            for cls in partition.classes:
                d = len(cls)
                if (d, round_idx) not in components:
                    components[(d, round_idx)] = find_component_matrix(
                        d, k,
                        coeff_bound=config.coeff_bound,
                        seed=config.seed,
                        budget=min(config.budget, 20000),
                        skip=round_idx,
                    )
            per_class = [components[(len(cls), round_idx)] for cls in partition.classes]
        except ComponentSearchExhausted:
            if round_idx == 0:
                raise
            break
        for exponents in ladder:
            if spent >= config.budget:
                raise LadderExhaustedError(
                    f"synthesis budget {config.budget} exhausted "
                    f"(last failure: {last_failure})"
                )
            spent += 1
            mats = [linalg.mat_pow([[Fraction(x) for x in row] for row in c.matrix], j)
                    for c, j in zip(per_class, exponents)]
            g = _scatter_block_diagonal(
                graph.n, partition.classes,
                [[[int(x) for x in row] for row in m] for m in mats],
            )
            blocks = extend_to_algebra(algebra, g)
            ok, payload = _check_blocks(blocks)
            if not ok:
                last_failure = f"exponents {exponents}: {payload[1]}"
                continue
            char_polys, certs, dets = payload
            return AutomorphismCertificate(
                graph_digest=graph.digest(),
                k=k,
                classes=partition.class_labels(),
                components=[c.to_json() for c in per_class],
                exponents=list(exponents),
                degree_blocks={m: [[int(x) for x in row] for row in b]
                               for m, b in blocks.items()},
                char_polys={m: p.to_json() for m, p in char_polys.items()},
                unit_root_certs={m: c.to_json() for m, c in certs.items()},
                determinants=dets,
            )
    raise LadderExhaustedError(
        f"exponent ladder exhausted at max_exponent {config.max_exponent} "
        f"(last failure: {last_failure})"
    )


# -- verification -------------------------------------------------------------


def verify_certificate(graph, cert):
    """Independently re-derive everything a certificate claims.

    Rebuilds the algebra, recomputes the partition, and checks: digest
    binding, the block-diagonal shape of degree one, exact bracket
    compatibility on all basis pairs, integrality and unimodularity per
    degree, and re-derived unit-root-freeness per degree.  Returns
    (ok, report); the report names the first failing check.
    """
    report = {"checks": []}

    def fail(name, detail):
        report["checks"].append({"name": name, "ok": False, "detail": detail})
        report["ok"] = False
        report["first_failure"] = name
        return False, report

    def passed(name):
        report["checks"].append({"name": name, "ok": True})

    if cert.graph_digest != graph.digest():
        return fail("graph-binding", "certificate digest does not match the graph")
    passed("graph-binding")

    partition = coherent_components(graph)
    if partition.class_labels() != cert.classes:
        return fail("partition", "recorded classes differ from the recomputed partition")
    passed("partition")

    algebra = quotient_algebra(graph, cert.k)
    for m in range(1, cert.k + 1):
        b = cert.degree_blocks.get(m)
        if b is None or len(b) != algebra.dims[m - 1]:
            return fail("block-shape", f"degree-{m} block missing or of wrong size")
    passed("block-shape")

    expected = _scatter_block_diagonal(
        graph.n, partition.classes,
        [[[int(x) for x in row] for row in
          linalg.mat_pow([[Fraction(x) for x in r] for r in comp["matrix"]], j)]
         for comp, j in zip(cert.components, cert.exponents)],
    )
    if cert.degree_blocks[1] != expected:
        return fail("degree-one-shape",
                    "degree-one block is not the recorded block-diagonal power")
    passed("degree-one-shape")

    blocks = {m: [[Fraction(x) for x in row] for row in cert.degree_blocks[m]]
              for m in cert.degree_blocks}
    for i in range(algebra.dim):
        di = algebra.degree_of(i)
        for j in range(i + 1, algebra.dim):
            dj = algebra.degree_of(j)
            m = di + dj
            if m > algebra.k:
                continue
            iloc = i - algebra.offsets[di]
            jloc = j - algebra.offsets[dj]
            lhs = [Fraction(0)] * algebra.dims[m - 1]
            for l, c in algebra.bracket_basis(i, j).items():
                lloc = l - algebra.offsets[m]
                for r in range(algebra.dims[m - 1]):
                    lhs[r] += blocks[m][r][lloc] * c
            rhs = [Fraction(0)] * algebra.dims[m - 1]
            bi = blocks[di]
            bj = blocks[dj]
            for p in range(algebra.dims[di - 1]):
                cp_ = bi[p][iloc]
                if not cp_:
                    continue
                for q in range(algebra.dims[dj - 1]):
                    cq = bj[q][jloc]
                    if not cq:
                        continue
                    pg = algebra.offsets[di] + p
                    qg = algebra.offsets[dj] + q
                    for l, c in algebra.bracket_basis(pg, qg).items():
                        rhs[l - algebra.offsets[m]] += cp_ * cq * c
            if lhs != rhs:
                return fail("bracket-compatibility", {
                    "pair": [algebra.word_label(algebra.word_of(i)),
                             algebra.word_label(algebra.word_of(j))],
                    "expected": [str(x) for x in rhs],
                    "got": [str(x) for x in lhs],
                })
    passed("bracket-compatibility")

    ok, payload = _check_blocks(blocks)
    if not ok:
        return fail(*payload)
    char_polys, certs, dets = payload
    passed("unimodularity")
    passed("unit-root-freeness")
    report["ok"] = True
    report["determinants"] = {str(m): d for m, d in dets.items()}
    report["char_polys"] = {str(m): p.to_json() for m, p in char_polys.items()}
    report["unit_root_certs"] = {str(m): c.to_json() for m, c in certs.items()}
    return True, report
