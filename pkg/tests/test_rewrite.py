import pytest
from helpers import chain_of, w, x
from SkewHopf.lib.chain import WindowException
from SkewHopf.lib.ncpoly import NCPoly, letter
from SkewHopf.lib.rewrite import (Family, Rule, RewriteException, RuleSet, ambiguities, check_confluence, complete,
                                  count_reduced_words, derive_rules, normal_form, oracle_dimension, reduced_words)

def test_free_matrix_rules(free2):
    chain, rules = free2
    assert len(rules) == 8
    up = rules.rules[w((0, 1, 2), (1, 2, 2))]
    assert up.family is Family.UP0
    assert up.rhs == -x(0, 1, 1) * x(1, 2, 1)
    down = rules.rules[w((1, 1, 1), (0, 1, 1))]
    assert down.family is Family.DOWN0
    assert down.rhs == 1 - x(1, 2, 1) * x(0, 2, 1)
    assert down.to_json()['family'] == '0down'

def test_collapse_m4_up_rule(m4):
    _, rules = m4
    rule = rules.rules[w((0, 1, 2), (1, 1, 2))]
    assert rule.rhs == 1 - x(0, 1, 1) * x(1, 1, 1)
    assert rule.source == (0, '1', '1')

def test_families_follow_parity():
    rules = derive_rules(chain_of('free-matrix', n=2, lo=-1, hi=1))
    by_level = {(rule.lhs[0].level, rule.family) for rule in rules}
    assert (-1, Family.UP1) in by_level
    assert (0, Family.UP0) in by_level
    assert (0, Family.DOWN1) in by_level
    assert (1, Family.DOWN0) in by_level

def test_normal_forms(free2):
    _, rules = free2
    assert normal_form(rules, x(0, 1, 2) * x(1, 2, 2)) == -x(0, 1, 1) * x(1, 2, 1)
    assert normal_form(rules, x(1, 1, 1) * x(0, 1, 1) + x(1, 2, 1) * x(0, 2, 1)) == 1
    assert normal_form(rules, NCPoly.constant(5)) == 5

def test_normal_form_is_idempotent_on_reduced_words(free2):
    _, rules = free2
    for word in reduced_words(rules, 2):
        p = NCPoly.from_word(word)
        assert rules.is_reduced(word)
        assert normal_form(rules, p) == p

def test_normal_form_rejects_letters_outside_window(free2):
    _, rules = free2
    with pytest.raises(WindowException) as e:
        normal_form(rules, x(2, 1, 1))
    assert e.value.code == 'LETTER_OUT_OF_WINDOW'

def test_duplicate_lhs_rejected(free2):
    chain, rules = free2
    rule = next(iter(rules))
    with pytest.raises(RewriteException) as e:
        RuleSet(chain, [rule, Rule(rule.lhs, NCPoly(), Family.DERIVED)])
    assert e.value.code == 'DUPLICATE_LHS'

def test_word_order_counts_occurrences_first(free2):
    _, rules = free2
    long_reduced = w((0, 1, 1), (0, 1, 1), (0, 1, 1))
    reducible = w((0, 1, 2), (1, 2, 2))
    assert rules.word_key(reducible) > rules.word_key(long_reduced)

def test_serialized_terms_follow_the_rewrite_order(free2):
    _, rules = free2
    p = x(0, 1, 2) * x(1, 2, 2) + x(0, 1, 1) * x(0, 1, 1) * x(0, 1, 1)
    assert str(p) == 'x[0,1,2]*x[1,2,2] + x[0,1,1]*x[0,1,1]*x[0,1,1]'
    assert p.text(rules.word_key) == 'x[0,1,1]*x[0,1,1]*x[0,1,1] + x[0,1,2]*x[1,2,2]'
    assert [word for _, word in p.to_json(rules.word_key)][0] == [[0, '1', '1']] * 3

def test_free_matrix_ambiguities(free2):
    _, rules = free2
    ambs = ambiguities(rules)
    assert len(ambs) == 8
    assert all(a.kind == 'overlap' and a.offset == 1 for a in ambs)
    words = {a.word for a in ambs}
    for i in '12':
        for j in '12':
            assert w((0, i, 2), (1, 1, 2), (0, 1, j)) in words
    assert all(a.residual(rules).is_zero() for a in ambs)

@pytest.mark.parametrize('n', [2, 3])
def test_free_matrix_is_confluent(n):
    chain = chain_of('free-matrix', n=n, lo=0, hi=2)
    assert chain.sup_ok
    report = check_confluence(derive_rules(chain))
    assert report.confluent
    assert report.resolved == report.total > 0

@pytest.mark.parametrize('name, params, total, unresolved', [
    ('collapse-m4', {'lo': 0, 'hi': 1}, 28, 8),
    ('collapse-m4', {'lo': -1, 'hi': 1}, 76, 40),
    ('growth', {'k': 3}, 488, 320),
])
def test_block_triangular_chains_leave_ambiguities(name, params, total, unresolved):
    chain = chain_of(name, **params)
    assert chain.sup_ok
    report = check_confluence(derive_rules(chain))
    assert not report.confluent
    assert report.total == total
    assert len(report.unresolved) == unresolved
    assert all(not p.is_zero() for _, p in report.unresolved)

def test_collapse_m4_residual_from_mixed_extremes():
    rules = derive_rules(chain_of('collapse-m4', lo=0, hi=1))
    # the row rule for (1,1) eliminates alpha = 2, the row rule for (1,3) alpha = 4
    assert w((0, 1, 2), (1, 1, 2)) in rules
    assert w((0, 1, 4), (1, 3, 4)) in rules
    report = check_confluence(rules)
    words = {a.word for a, _ in report.unresolved}
    assert w((0, 1, 2), (1, 1, 2), (0, 1, 3)) in words

def test_oracle_sees_dependent_reduced_words_on_collapse_m4():
    chain = chain_of('collapse-m4', lo=0, hi=1)
    rules = derive_rules(chain)
    counts = count_reduced_words(rules, 3)
    assert sum(counts) == 13277
    assert oracle_dimension(chain, 3, rules) == 13273

def test_needge2_is_not_confluent():
    rules = derive_rules(chain_of('needge2', n=2))
    report = check_confluence(rules)
    assert not report.confluent
    residuals = {str(p) for _, p in report.unresolved}
    assert 'x[-1,1,1] - x[1,1,1]' in residuals or '-x[-1,1,1] + x[1,1,1]' in residuals
    data = report.to_json()
    assert data['resolved'] + len(data['unresolved']) == data['ambiguities']

def test_single_letters_are_distinct_normal_forms():
    for name, params in [('free-matrix', {'n': 2, 'lo': 0, 'hi': 2}), ('collapse-m4', {'lo': -1, 'hi': 1}),
                         ('growth', {'k': 3})]:
        chain = chain_of(name, **params)
        rules = derive_rules(chain)
        forms = [normal_form(rules, NCPoly.from_letter(l)) for l in chain.letters()]
        assert forms == [NCPoly.from_letter(l) for l in chain.letters()]
        assert len(set(forms)) == len(forms)

def test_counts_match_oracle_on_free_matrix(free2):
    chain, rules = free2
    assert count_reduced_words(rules, 2) == [1, 8, 56]
    assert [oracle_dimension(chain, n, rules) for n in range(3)] == [1, 9, 65]

def test_counts_match_oracle_on_collapse_m4():
    chain = chain_of('collapse-m4', lo=-1, hi=0)
    rules = derive_rules(chain)
    counts = count_reduced_words(rules, 2)
    assert counts[1] == 28
    for n in range(3):
        assert oracle_dimension(chain, n, rules) == sum(counts[:n + 1])

def test_counts_agree_with_enumeration(m4):
    _, rules = m4
    counts = count_reduced_words(rules, 3)
    words = reduced_words(rules, 3)
    assert [sum(1 for word in words if len(word) == n) for n in range(4)] == counts

def test_oracle_guard(free2, monkeypatch):
    chain, rules = free2
    monkeypatch.setenv('SKEWHOPF_MAX_WORDS', '10')
    with pytest.raises(RewriteException) as e:
        oracle_dimension(chain, 2, rules)
    assert e.value.code == 'TOO_LARGE'
    assert e.value.exit_code == 2

def test_completion_of_confluent_system_is_a_fixpoint(free2):
    _, rules = free2
    result = complete(rules)
    assert result.fixpoint
    assert result.derived == []
    assert result.iterations == 1
    assert len(result.rules) == len(rules)
    again = complete(result.rules)
    assert again.fixpoint and again.derived == []

def test_completion_on_needge2_derives_relations():
    rules = derive_rules(chain_of('needge2', n=2))
    result = complete(rules, max_degree=3, max_iters=4)
    assert result.derived
    assert x(1, 1, 1) - x(-1, 1, 1) in result.derived
    assert all(1 in p.terms.values() for p in result.derived)
    data = result.to_json()
    assert data['derivedText'] == [p.text(result.rules.word_key) for p in result.derived]

def test_completion_on_needge2_is_idempotent():
    rules = derive_rules(chain_of('needge2', n=2))
    result = complete(rules, max_degree=3, max_iters=4)
    assert result.derived
    again = complete(result.rules, max_degree=3, max_iters=4)
    assert again.derived == []
    assert again.fixpoint
    assert set(again.rules.rules) == set(result.rules.rules)

def test_completion_needs_degree_two():
    rules = derive_rules(chain_of('needge2', n=2))
    with pytest.raises(RewriteException) as e:
        complete(rules, max_degree=1)
    assert e.value.code == 'BAD_PARAMS'

def _swap(word):
    return tuple(letter(2 - l.level, l.col, l.row) for l in word)

def _swap_poly(p):
    return NCPoly.combine((_swap(word), c) for word, c in p.items())

def test_level_reflection_maps_rules_to_rules():
    rules = derive_rules(chain_of('free-matrix', n=2, lo=0, hi=2))
    partner = {Family.UP0: Family.DOWN1, Family.DOWN1: Family.UP0, Family.UP1: Family.DOWN0, Family.DOWN0: Family.UP1}
    for rule in rules:
        image = rules.rules[_swap(rule.lhs)]
        assert image.family is partner[rule.family]
        assert image.rhs == _swap_poly(rule.rhs)

def test_level_reflection_commutes_with_normal_forms():
    chain = chain_of('free-matrix', n=2, lo=0, hi=2)
    rules = derive_rules(chain)
    for a in chain.letters(0) + chain.letters(2):
        for b in chain.letters(1):
            p = NCPoly.from_word((a, b)) + NCPoly.from_word((b, a))
            assert _swap_poly(normal_form(rules, p)) == normal_form(rules, _swap_poly(p))

def test_runaway_rule_hits_the_depth_guard(free2):
    chain, _ = free2
    growing = Rule(w((0, 1, 1)), x(0, 1, 1) * x(0, 1, 1), Family.DERIVED)
    with pytest.raises(RewriteException) as e:
        RuleSet(chain, [growing]).normal_form(x(0, 1, 1))
    assert e.value.code == 'REDUCTION_LIMIT'
