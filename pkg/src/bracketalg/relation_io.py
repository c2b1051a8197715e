"""Relation-file I/O and the structural validator for the shipped corpus.

A relation file is UTF-8 text with one ``<coefficient> * <tree>`` term per
line.  Lines starting with ``#`` are comments; the special comment form
``## grade N`` opens a block and is recorded as per-term provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .algebra import LEAF, Term, act, check_tree, expand, grade, parity, spin
from .exactnum import ParamPoly
from .parsing import ParseError, parse_term

CORPUS_RESOURCE = "relation_h6.alg"

EXPECTED_GRADES = frozenset({6, 4, 2})


class CorpusInvariantError(ValueError):
    """A parsed term violates a corpus invariant (bad tree, wrong spin-parity)."""

    def __init__(self, message, term_index):
        super().__init__("term %d: %s" % (term_index, message))
        self.term_index = term_index


@dataclass
class RelationCorpus:
    """An ordered list of (coefficient, tree) terms with per-term provenance.

    ``provenance[k]`` is the text of the most recent ``## ...`` block marker
    above term ``k`` (empty string if none).
    """

    terms: list = field(default_factory=list)
    provenance: list = field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    def blocks(self):
        """Group term indices by provenance label, preserving file order."""
        out = {}
        for k, label in enumerate(self.provenance):
            out.setdefault(label, []).append(k)
        return out


def parse(text):
    """Parse relation-file text into a RelationCorpus.

    Raises ParseError (with position) on bad syntax and CorpusInvariantError
    (with term index) when a term's tree fails check_tree or is not
    spin-parity 0+.
    """
    corpus = RelationCorpus()
    block = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("##"):
                block = line.lstrip("#").strip()
            continue
        try:
            coeff, tree = parse_term(line)
        except ParseError as exc:
            raise ParseError(exc.message, exc.pos, lineno) from None
        idx = len(corpus.terms)
        report = check_tree(tree)
        if not report.ok():
            raise CorpusInvariantError(str(report), idx)
        if spin(tree) != 0 or parity(tree) != 1:
            raise CorpusInvariantError(
                "spin-parity is %d%s, expected 0+"
                % (spin(tree), "+" if parity(tree) == 1 else "-"),
                idx,
            )
        corpus.terms.append(Term(coeff, tree))
        corpus.provenance.append(block)
    return corpus


def serialize(corpus):
    """Render a corpus back to file text in canonical form.

    Block markers are re-emitted whenever the provenance label changes, so
    parse(serialize(c)) reproduces c exactly.
    """
    lines = []
    current = None
    for term, label in zip(corpus.terms, corpus.provenance):
        if label != current:
            if lines:
                lines.append("")
            if label:
                lines.append("## " + label)
            current = label
        lines.append("%s * %s" % (_coeff_str(term.coefficient), term.tree))
    return "\n".join(lines) + ("\n" if lines else "")


def _coeff_str(poly):
    s = str(poly)
    if len(poly.terms) > 1 or any(len(v.terms) > 1 for v in poly.terms.values()):
        return "(" + s + ")"
    return s


@dataclass
class BlockReport:
    """Validation summary: per-grade counts and degrees, B-coefficients, violations."""

    grade_counts: dict = field(default_factory=dict)
    grade_degrees: dict = field(default_factory=dict)  # grade -> (deg f, deg g1, deg g2)
    grade4_nonb_count: int = 0
    b3_coefficient: ParamPoly | None = None
    b1_coefficient: ParamPoly | None = None

    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def render(self, structured=False):
        """Documented text serialization.

        Structured form: one ``key value...`` record per line —
        ``grade_count <grade> <n>``, ``grade_degree <grade> <df> <dg1> <dg2>``,
        ``grade4_nonb_count <n>``, ``b3_coefficient <poly>``,
        ``b1_coefficient <poly>``, ``violation <index> <message>``, and a
        final ``ok true|false``.
        """
        lines = []
        if structured:
            for g in sorted(self.grade_counts, reverse=True):
                lines.append("grade_count %d %d" % (g, self.grade_counts[g]))
            for g in sorted(self.grade_degrees, reverse=True):
                lines.append("grade_degree %d %d %d %d" % ((g,) + self.grade_degrees[g]))
            lines.append("grade4_nonb_count %d" % self.grade4_nonb_count)
            if self.b3_coefficient is not None:
                lines.append("b3_coefficient %s" % self.b3_coefficient)
            if self.b1_coefficient is not None:
                lines.append("b1_coefficient %s" % self.b1_coefficient)
            for idx, msg in self.violations:
                lines.append("violation %s %s" % (idx, msg))
            lines.append("ok %s" % ("true" if self.ok else "false"))
        else:
            lines.append("grade blocks: %s" % sorted(self.grade_counts, reverse=True))
            for g in sorted(self.grade_counts, reverse=True):
                df, dg1, dg2 = self.grade_degrees[g]
                lines.append(
                    "  grade %d: %d terms, parameter degrees f=%d g1=%d g2=%d"
                    % (g, self.grade_counts[g], df, dg1, dg2)
                )
            lines.append("grade-4 terms outside the B family: %d" % self.grade4_nonb_count)
            if self.b3_coefficient is not None:
                lines.append("B3 coefficient: %s" % self.b3_coefficient)
            if self.b1_coefficient is not None:
                lines.append("B1 coefficient: %s" % self.b1_coefficient)
            if self.ok:
                lines.append("no violations")
            else:
                lines.append("%d violation(s):" % len(self.violations))
                for idx, msg in self.violations:
                    lines.append("  term %s: %s" % (idx, msg))
        return "\n".join(lines)


def _degrees(poly):
    return (poly.degree("f"), poly.degree("g1"), poly.degree("g2"))


def _is_b_leaf(tree):
    return tree.kind == LEAF and tree.gen.name.startswith("B")


def validate(corpus):
    """Check every structural claim about the corpus and return a BlockReport.

    Clauses:
      (a) every term has spin-parity 0+;
      (b) grades lie in {6, 4, 2} (in particular no grade 5 or 3);
      (c) grade-6 coefficients are parameter-free;
      (d) grade-4 coefficients outside the B family are affine in f with zero
          g-degree, and there are exactly 11 such terms;
      (e) the B3 coefficient is a non-zero constant;
      (f) the grade-2 block consists of the {J1,J1} scalar term, whose
          coefficient has f-degree 2 and g2-degree 1, plus the B1 term, whose
          coefficient is affine in f and g1.
    All findings go to the report; nothing raises.
    """
    rep = BlockReport()
    grade2_bracket = None

    for idx, term in enumerate(corpus.terms):
        tree = term.tree
        coeff = term.coefficient
        g = grade(tree)
        rep.grade_counts[g] = rep.grade_counts.get(g, 0) + 1
        degs = _degrees(coeff)
        old = rep.grade_degrees.get(g, (0, 0, 0))
        rep.grade_degrees[g] = tuple(max(a, b) for a, b in zip(old, degs))

        if spin(tree) != 0 or parity(tree) != 1:
            rep.violations.append(
                (idx, "spin-parity %d%s is not 0+"
                 % (spin(tree), "+" if parity(tree) == 1 else "-"))
            )
        if g not in EXPECTED_GRADES:
            kind = "breaks the mod-2 grading of the corrections" if g in (5, 3) else "is outside the expected blocks"
            rep.violations.append((idx, "grade %d %s" % (g, kind)))
            continue

        if g == 6:
            if not coeff.is_constant():
                rep.violations.append((idx, "grade-6 coefficient depends on parameters"))
        elif g == 4:
            if _is_b_leaf(tree):
                if tree.gen.name != "B3":
                    rep.violations.append((idx, "unexpected B generator %s at grade 4" % tree.gen.name))
                elif rep.b3_coefficient is not None:
                    rep.violations.append((idx, "duplicate B3 term"))
                else:
                    rep.b3_coefficient = coeff
                    if not coeff.is_constant():
                        rep.violations.append((idx, "B3 coefficient depends on parameters"))
                    elif not coeff.terms:
                        rep.violations.append((idx, "B3 coefficient vanishes"))
            else:
                rep.grade4_nonb_count += 1
                if degs[0] > 1 or degs[1] > 0 or degs[2] > 0:
                    rep.violations.append(
                        (idx, "grade-4 coefficient not affine in f with zero g-degree "
                         "(degrees f=%d g1=%d g2=%d)" % degs)
                    )
        else:  # g == 2
            if _is_b_leaf(tree):
                if tree.gen.name != "B1":
                    rep.violations.append((idx, "unexpected B generator %s at grade 2" % tree.gen.name))
                elif rep.b1_coefficient is not None:
                    rep.violations.append((idx, "duplicate B1 term"))
                else:
                    rep.b1_coefficient = coeff
                    if degs[0] > 1 or degs[1] > 1 or degs[2] > 0:
                        rep.violations.append(
                            (idx, "B1 coefficient not affine in f and g1 "
                             "(degrees f=%d g1=%d g2=%d)" % degs)
                        )
            else:
                if not (tree.kind != LEAF
                        and tree.left.kind == LEAF and tree.left.gen.name == "J1"
                        and tree.right.kind == LEAF and tree.right.gen.name == "J1"):
                    rep.violations.append((idx, "grade-2 term is neither a {J1,J1} coupling nor B1"))
                elif grade2_bracket is not None:
                    rep.violations.append((idx, "duplicate {J1,J1} term at grade 2"))
                else:
                    grade2_bracket = idx
                    if degs[0] != 2 or degs[2] != 1 or degs[1] != 0:
                        rep.violations.append(
                            (idx, "{J1,J1} coefficient degrees f=%d g1=%d g2=%d, expected f=2 g1=0 g2=1" % degs)
                        )

    if rep.grade4_nonb_count != 11 and 4 in rep.grade_counts:
        rep.violations.append(
            ("-", "expected 11 grade-4 terms outside the B family, found %d" % rep.grade4_nonb_count)
        )
    if 4 in rep.grade_counts and rep.b3_coefficient is None:
        rep.violations.append(("-", "missing B3 term at grade 4"))
    if 2 in rep.grade_counts:
        if rep.b1_coefficient is None:
            rep.violations.append(("-", "missing B1 term at grade 2"))
        if grade2_bracket is None:
            rep.violations.append(("-", "missing {J1,J1} term at grade 2"))
    return rep


@dataclass
class CovarianceReport:
    """Per-term result of the scalar-annihilation check."""

    results: list = field(default_factory=list)  # (index, ok)

    @property
    def ok(self):
        return all(flag for _, flag in self.results)

    @property
    def failures(self):
        return [idx for idx, flag in self.results if not flag]

    def render(self, structured=False):
        if structured:
            lines = ["term %d %s" % (i, "ok" if f else "FAIL") for i, f in self.results]
            lines.append("ok %s" % ("true" if self.ok else "false"))
            return "\n".join(lines)
        if self.ok:
            return "all %d terms annihilated by Jplus and Jminus" % len(self.results)
        return "covariance failures at terms: %s" % self.failures


def covariance_check(corpus):
    """Verify each term expands to an so(3) scalar: J+ and J- both kill it."""
    rep = CovarianceReport()
    for idx, term in enumerate(corpus.terms):
        w = expand(term.tree, 0)
        ok = not act("Jplus", w).terms and not act("Jminus", w).terms
        rep.results.append((idx, ok))
    return rep


def corpus_text():
    """Raw text of the shipped relation file."""
    return resources.files("bracketalg.data").joinpath(CORPUS_RESOURCE).read_text("utf-8")


def load_corpus():
    """Parse and return the shipped corpus."""
    return parse(corpus_text())
