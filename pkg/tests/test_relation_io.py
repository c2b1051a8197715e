"""Relation files, the shipped corpus, the validator, fault injection."""

from fractions import Fraction

import pytest

from bracketalg import relation_io
from bracketalg.algebra import Term, acom, com, leaf
from bracketalg.exactnum import ParamPoly, RadNum
from bracketalg.parsing import ParseError, parse_term
from bracketalg.relation_io import (
    CorpusInvariantError,
    RelationCorpus,
    covariance_check,
    load_corpus,
    parse,
    serialize,
    validate,
)


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


def test_empty_corpus_round_trip():
    c = parse("")
    assert len(c) == 0
    assert serialize(c) == ""
    assert len(parse(serialize(c))) == 0


def test_single_term_parse():
    c = parse("(-1729/5)*sqrt(2)*i * com(com(com(T2,S1;2),S1;1),com(S2,S1;1);0)")
    assert len(c) == 1
    term = c.terms[0]
    assert term.coefficient == ParamPoly.const(RadNum({-2: Fraction(-1729, 5)}))
    from bracketalg.algebra import grade
    assert grade(term.tree) == 6


def test_triangle_violation_rejected():
    with pytest.raises(CorpusInvariantError):
        parse("1 * com(T2,S1;5)")


def test_non_scalar_term_rejected():
    # valid tree, but spin-parity 2- rather than 0+
    with pytest.raises(CorpusInvariantError):
        parse("1 * com(T2,S1;2)")


def test_syntax_error_has_line_number():
    with pytest.raises(ParseError) as exc:
        parse("# fine\n1 * acom(J1,J1;0)\n1 * com(T2,;1)")
    assert exc.value.line == 3


def test_block_markers_recorded(corpus):
    blocks = corpus.blocks()
    assert set(blocks) == {"grade 6", "grade 4", "grade 2"}
    assert len(blocks["grade 6"]) == 98
    assert len(blocks["grade 4"]) == 12
    assert len(blocks["grade 2"]) == 2


def test_shipped_corpus_round_trip(corpus):
    again = parse(serialize(corpus))
    assert again.terms == corpus.terms
    assert again.provenance == corpus.provenance


def test_shipped_corpus_validates(corpus):
    rep = validate(corpus)
    assert rep.ok, rep.violations
    assert sorted(rep.grade_counts) == [2, 4, 6]
    assert rep.grade_counts == {6: 98, 4: 12, 2: 2}
    assert rep.grade4_nonb_count == 11


def test_b_coefficients(corpus):
    rep = validate(corpus)
    assert rep.b3_coefficient == ParamPoly.const(-50176)
    f, g1 = ParamPoly.param("f"), ParamPoly.param("g1")
    expected = ParamPoly.const(Fraction(5513476864, 135)) \
        + f * Fraction(2747136, 5) + g1 * 50176
    assert rep.b1_coefficient == expected


def test_grade2_bracket_coefficient_degrees(corpus):
    rep = validate(corpus)
    assert rep.grade_degrees[2] == (2, 1, 1)
    assert rep.grade_degrees[6] == (0, 0, 0)
    assert rep.grade_degrees[4] == (1, 0, 0)


def test_report_renderings(corpus):
    rep = validate(corpus)
    human = rep.render()
    assert "B3 coefficient: -50176" in human
    structured = rep.render(structured=True)
    assert "grade_count 6 98" in structured.splitlines()
    assert structured.splitlines()[-1] == "ok true"
    # stable across repeated runs
    assert validate(corpus).render(structured=True) == structured


def test_covariance_single_scalar_term():
    c = parse("1 * acom(J1,J1;0)")
    rep = covariance_check(c)
    assert rep.ok
    assert rep.results == [(0, True)]


def test_shipped_corpus_covariance(corpus):
    rep = covariance_check(corpus)
    assert rep.ok, rep.failures
    assert len(rep.results) == len(corpus)


# ---------------------------------------------------------------------------
# Fault injection: one minimal mutation per validator clause
# ---------------------------------------------------------------------------

def _inject(corpus, coeff_text, tree_text, label):
    coeff, tree = parse_term("%s * %s" % (coeff_text, tree_text))
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    mutated.terms.append(Term(coeff, tree))
    mutated.provenance.append(label)
    return mutated


def test_clause_a_spin_parity(corpus):
    # a structurally valid 2- term; bypasses parse-time screening
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    mutated.terms.append(Term(ParamPoly.const(1),
                              com(leaf("T2"), leaf("S1"), 2)))
    mutated.provenance.append("grade 6")
    rep = validate(mutated)
    assert sum("spin-parity" in msg for _, msg in rep.violations) == 1


def test_clause_b_grading(corpus):
    # grade 5 = 2+2-1 (com) + 2 (acom with S2): breaks the mod-2 pattern
    mutated = _inject(corpus, "1", "acom(com(T2,S1;2),S2;0)", "grade 4")
    rep = validate(mutated)
    grading = [msg for _, msg in rep.violations if "grade 5" in msg]
    assert len(grading) == 1
    assert len(rep.violations) == 1


def test_clause_c_grade6_parameter_free(corpus):
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    t0 = mutated.terms[0]
    mutated.terms[0] = Term(t0.coefficient * ParamPoly.param("f"), t0.tree)
    rep = validate(mutated)
    assert sum("grade-6" in msg for _, msg in rep.violations) == 1


def test_clause_d_grade4_affine(corpus):
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    for k, term in enumerate(mutated.terms):
        from bracketalg.algebra import grade
        if grade(term.tree) == 4 and term.tree.kind != "leaf":
            mutated.terms[k] = Term(
                term.coefficient * ParamPoly.param("f"), term.tree)
            break
    rep = validate(mutated)
    assert sum("affine" in msg for _, msg in rep.violations) == 1


def test_clause_d_count(corpus):
    mutated = _inject(corpus, "1", "acom(B1,B1;0)", "grade 4")
    rep = validate(mutated)
    assert any("expected 11" in msg for _, msg in rep.violations)


def test_clause_e_b3(corpus):
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    for k, term in enumerate(mutated.terms):
        if term.tree == leaf("B3"):
            mutated.terms[k] = Term(
                term.coefficient + ParamPoly.param("g2"), term.tree)
            break
    rep = validate(mutated)
    assert sum("B3" in msg for _, msg in rep.violations) == 1


def test_clause_f_b1(corpus):
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    for k, term in enumerate(mutated.terms):
        if term.tree == leaf("B1"):
            f = ParamPoly.param("f")
            mutated.terms[k] = Term(term.coefficient * f * f, term.tree)
            break
    rep = validate(mutated)
    assert sum("B1" in msg for _, msg in rep.violations) == 1


def test_clause_f_jj_degrees(corpus):
    mutated = RelationCorpus(list(corpus.terms), list(corpus.provenance))
    for k, term in enumerate(mutated.terms):
        if term.tree == acom(leaf("J1"), leaf("J1"), 0):
            mutated.terms[k] = Term(
                term.coefficient * ParamPoly.param("g2"), term.tree)
            break
    rep = validate(mutated)
    assert sum("{J1,J1}" in msg for _, msg in rep.violations) == 1


def test_validator_reports_do_not_raise(corpus):
    mutated = _inject(corpus, "f*g1*g2", "acom(T2,S1;2)".replace("T2,S1;2", "J1,J1;2"), "grade 2")
    rep = validate(mutated)  # spin-2 term at grade 2: multiple clauses fire
    assert not rep.ok
