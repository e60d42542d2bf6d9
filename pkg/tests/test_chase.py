import random

import pytest

from repairspace import (
    RoundCapExceeded,
    entails,
    find_homomorphisms,
    ground_closure,
    is_consistent,
    parse_kb,
    parse_query,
    saturate,
    skolemized_rules,
)
from repairspace.chase import chase_atoms, skolemize_rule
from repairspace.model import Atom, Query, SkolemTerm, Variable

from conftest import random_kb_text


def _facts(kb, indices):
    return [kb.facts[i] for i in indices]


# --- skolemization ---------------------------------------------------------------


def test_skolemize_existential_rule():
    kb = parse_kb("@facts\nperson(john).\n@rules\nparent(Y, X) :- person(X).\n")
    (rule,) = skolemized_rules(kb)
    head = rule.head[0]
    assert head.predicate == "parent"
    sk = head.args[0]
    assert isinstance(sk, SkolemTerm)
    assert sk.functor == "sk_r1_Y"
    assert sk.args == (Variable("X"),)
    assert head.args[1] == Variable("X")
    assert not rule.existential_vars


def test_skolemize_keeps_plain_rule_unchanged(example_kb):
    for rule in example_kb.rules:
        assert skolemize_rule(rule) is rule


def test_skolem_functors_distinct_across_rules():
    kb = parse_kb(
        "@facts\np(a).\n@rules\nq(Y, X) :- p(X).\nr(Y, X) :- p(X).\n"
    )
    r1, r2 = skolemized_rules(kb)
    f1 = r1.head[0].args[0].functor
    f2 = r2.head[0].args[0].functor
    assert f1 != f2


# --- homomorphisms ---------------------------------------------------------------


def test_homomorphisms_on_babies(example_kb):
    q = parse_query("baby(X)")
    homs = find_homomorphisms(q.atoms, _facts(example_kb, [0, 3, 4, 5]))
    images = {h[Variable("X")].name for h in homs}
    assert images == {"m", "j"}
    assert len(homs) == 2


def test_homomorphism_conjunction_unique(example_kb):
    q = parse_query("go_to(X, nanny), go_to(X, day_care)")
    homs = find_homomorphisms(q.atoms, example_kb.facts)
    assert len(homs) == 1
    assert homs[0][Variable("X")].name == "m"


def test_homomorphisms_empty_target():
    q = parse_query("baby(X)")
    assert find_homomorphisms(q.atoms, []) == []


def test_homomorphism_order_deterministic(example_kb):
    q = parse_query("go_to(X, Y)")
    first = find_homomorphisms(q.atoms, example_kb.facts)
    second = find_homomorphisms(q.atoms, example_kb.facts)
    assert first == second
    assert len(first) == 3


# --- saturation -----------------------------------------------------------------


def test_saturate_derives_symmetric_sibling(example_kb):
    rules = skolemized_rules(example_kb)
    sat = saturate(_facts(example_kb, [0, 3, 4, 6, 7]), rules)
    assert Atom.of("siblings", "j", "m") in sat.atoms


def test_saturate_tracks_minimal_support(example_kb):
    rules = skolemized_rules(example_kb)
    facts = _facts(example_kb, [0, 1, 4, 6])
    sat = saturate(facts, rules)
    ill = Atom.of("get_ill", "m")
    # go_to(m, day_care) sits at position 1 of the input list
    assert sat.provenance[ill] == {frozenset({1})}


def test_saturate_initial_fact_provenance(example_kb):
    rules = skolemized_rules(example_kb)
    facts = _facts(example_kb, [0, 4])
    sat = saturate(facts, rules)
    for i, f in enumerate(facts):
        assert sat.provenance[f] == {frozenset({i})}


def test_saturate_empty_input(example_kb):
    sat = saturate([], skolemized_rules(example_kb))
    assert sat.atoms == frozenset()


def test_round_cap_exceeded():
    kb = parse_kb("@facts\nnext(a, b).\n@rules\nnext(Y, Z) :- next(X, Y).\n")
    with pytest.raises(RoundCapExceeded):
        saturate(kb.facts, skolemized_rules(kb), max_rounds=10)
    with pytest.raises(RoundCapExceeded):
        ground_closure(kb.facts, skolemized_rules(kb), max_rounds=10)


# --- ground closure --------------------------------------------------------------


def test_ground_closure_filters_skolem_atoms():
    kb = parse_kb("@facts\nperson(john).\n@rules\nparent(Y, X) :- person(X).\n")
    rules = skolemized_rules(kb)
    full = chase_atoms(kb.facts, rules)
    assert any(a.has_skolem() for a in full)
    assert ground_closure(kb.facts, rules) == frozenset(kb.facts)


def test_ground_closure_applies_rules(example_kb):
    rules = skolemized_rules(example_kb)
    closure = ground_closure(_facts(example_kb, [0, 3, 4, 5]), rules)
    assert Atom.of("get_ill", "j") in closure


def test_ground_closure_no_rules(example_kb):
    assert ground_closure(example_kb.facts, ()) == frozenset(example_kb.facts)


# --- consistency ------------------------------------------------------------------


def test_full_fact_set_inconsistent(example_kb):
    rules = skolemized_rules(example_kb)
    assert not is_consistent(example_kb.facts, rules, example_kb.constraints)


def test_repair_content_consistent(example_kb):
    rules = skolemized_rules(example_kb)
    assert is_consistent(
        _facts(example_kb, [0, 1, 4, 5, 7]), rules, example_kb.constraints
    )


def test_empty_set_consistent(example_kb):
    rules = skolemized_rules(example_kb)
    assert is_consistent([], rules, example_kb.constraints)


def test_derived_violation_detected():
    kb = parse_kb(
        "@facts\np(a).\nq(a).\n@rules\nt(X) :- p(X).\n@constraints\n! :- t(X), q(X).\n"
    )
    assert not is_consistent(kb.facts, skolemized_rules(kb), kb.constraints)


# --- entailment -------------------------------------------------------------------


def test_entails_on_closure(example_kb):
    rules = skolemized_rules(example_kb)
    closure = ground_closure(_facts(example_kb, [0, 3, 4, 6, 7]), rules)
    assert entails(closure, parse_query("baby(X)"))
    assert not entails(closure, parse_query("baby(X), get_ill(X)"))


def test_entails_reflexive(example_kb):
    facts = list(example_kb.facts)
    for a in facts:
        assert entails(facts, Query(atoms=(a,)))


def test_entails_invariant_under_renaming(example_kb):
    facts = example_kb.facts
    assert entails(facts, parse_query("go_to(X, Y)")) == entails(
        facts, parse_query("go_to(V, W)")
    )


# --- properties over random inputs -------------------------------------------------


def test_saturation_monotone_in_facts():
    rng = random.Random(101)
    for _ in range(30):
        kb = parse_kb(random_kb_text(rng, max_facts=8))
        rules = skolemized_rules(kb)
        n = len(kb.facts)
        small = rng.sample(range(n), rng.randint(0, n))
        sub = [kb.facts[i] for i in small]
        assert saturate(sub, rules).atoms <= saturate(kb.facts, rules).atoms


def test_support_soundness_and_minimality():
    rng = random.Random(202)
    for _ in range(25):
        kb = parse_kb(random_kb_text(rng, max_facts=7))
        rules = skolemized_rules(kb)
        sat = saturate(kb.facts, rules)
        for atom, family in sat.provenance.items():
            for support in family:
                sub = [kb.facts[i] for i in sorted(support)]
                assert atom in saturate(sub, rules).atoms
                for drop in support:
                    weaker = [kb.facts[i] for i in sorted(support - {drop})]
                    assert atom not in saturate(weaker, rules).atoms


def test_saturation_idempotent():
    rng = random.Random(303)
    for _ in range(20):
        kb = parse_kb(random_kb_text(rng, max_facts=8))
        rules = skolemized_rules(kb)
        closure = chase_atoms(kb.facts, rules)
        assert chase_atoms(closure, rules) == closure
