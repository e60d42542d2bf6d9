import random

import pytest

from repairspace import (
    DifResult,
    Partition,
    Semantics,
    compute_repairs,
    dif_answer,
    entails_scoped,
    ics_core,
    parse_kb,
    parse_query,
    skolemized_rules,
)

from conftest import (
    CANONICAL_PARTITION,
    CANONICAL_PARTITION_LABELS,
    random_kb_text,
    random_query_text,
)

ILL_BABY = "baby(X), get_ill(X)"


@pytest.fixture(scope="module")
def babies(example_kb):
    return compute_repairs(example_kb), skolemized_rules(example_kb)


def ask(babies, scope, text, semantics):
    repairs, rules = babies
    return entails_scoped(repairs, scope, parse_query(text), rules, semantics)


# --- semantics parsing ------------------------------------------------------------


def test_semantics_parse():
    assert Semantics.parse("ar") is Semantics.AR
    assert Semantics.parse(" Icr ") is Semantics.ICR
    assert Semantics.parse("IAR") is Semantics.IAR
    with pytest.raises(ValueError, match="unknown semantics"):
        Semantics.parse("majority")


# --- reference answers on the example -----------------------------------------------


def test_isolated_cluster_rejects_illness(babies):
    assert ask(babies, (5,), ILL_BABY, Semantics.AR) is False


def test_mixed_cluster_accepts_illness(babies):
    assert ask(babies, (0, 2), ILL_BABY, Semantics.AR) is True
    assert ask(babies, (0, 2), ILL_BABY, Semantics.ICR) is True
    assert ask(babies, (0, 2), ILL_BABY, Semantics.IAR) is True


def test_full_scope_answers(babies):
    full = range(6)
    assert ask(babies, full, "baby(m)", Semantics.ICR) is True
    assert ask(babies, full, "baby(m)", Semantics.IAR) is True
    assert ask(babies, full, "get_ill(X)", Semantics.ICR) is False
    assert ask(babies, full, "get_ill(X)", Semantics.AR) is False
    assert ask(babies, full, "siblings(m, j)", Semantics.ICR) is False


def test_partition_answers_per_block(babies):
    repairs, rules = babies
    partition = Partition(blocks=CANONICAL_PARTITION)
    result = dif_answer(repairs, partition, parse_query(ILL_BABY), rules, Semantics.AR)
    assert result.answers == (True, True, False)


def test_all_singletons_partition_gives_per_repair_vector(babies):
    repairs, rules = babies
    singletons = Partition.from_blocks([[i] for i in range(6)])
    query = parse_query(ILL_BABY)
    result = dif_answer(repairs, singletons, query, rules, Semantics.AR)
    expected = tuple(
        entails_scoped(repairs, (i,), query, rules, Semantics.AR) for i in range(6)
    )
    assert result.answers == expected
    assert result.answers == (True, True, True, True, True, False)


# --- consensus atoms ------------------------------------------------------------------


def test_consensus_core_of_sibling_pair(babies):
    repairs, rules = babies
    core = {str(a) for a in ics_core(repairs, (0, 2), rules)}
    assert core == {
        "baby(m)",
        "baby(j)",
        "go_to(j, day_care)",
        "siblings(m, j)",
        "siblings(j, m)",
        "get_ill(m)",
        "get_ill(j)",
    }


def test_consensus_core_of_singleton_is_its_closure(babies):
    repairs, rules = babies
    core = ics_core(repairs, (5,), rules)
    assert core == repairs[5].ground_closure(rules)
    assert len(core) == 6
    assert not any(a.predicate == "get_ill" for a in core)


def test_consensus_core_full_scope(babies):
    repairs, rules = babies
    core = {str(a) for a in ics_core(repairs, range(6), rules)}
    assert core == {"baby(m)", "baby(j)"}


# --- scope validation -------------------------------------------------------------------


def test_empty_scope_rejected(babies):
    with pytest.raises(ValueError, match="at least one repair"):
        ask(babies, (), "baby(m)", Semantics.AR)


def test_out_of_range_scope_rejected(babies):
    with pytest.raises(ValueError, match="out of range"):
        ask(babies, (0, 6), "baby(m)", Semantics.AR)


def test_dif_requires_full_partition(babies):
    repairs, rules = babies
    partial = Partition.from_blocks([[0], [1]])
    with pytest.raises(ValueError, match="partition covers"):
        dif_answer(repairs, partial, parse_query("baby(m)"), rules, Semantics.AR)


def test_dif_result_requires_answer_per_block():
    partition = Partition.from_blocks([[0], [1]])
    with pytest.raises(ValueError, match="one answer per"):
        DifResult(
            query=parse_query("baby(m)"),
            semantics=Semantics.AR,
            partition=partition,
            answers=(True,),
        )


def test_dif_result_serialization(babies):
    repairs, rules = babies
    partition = Partition(blocks=CANONICAL_PARTITION)
    result = dif_answer(repairs, partition, parse_query(ILL_BABY), rules, Semantics.AR)
    doc = result.to_dict()
    assert doc == {
        "query": "baby(X), get_ill(X)",
        "semantics": "AR",
        "blocks": CANONICAL_PARTITION_LABELS,
        "answers": [True, True, False],
    }


# --- semantic laws ------------------------------------------------------------------------


def test_singleton_scopes_collapse(babies):
    queries = ["baby(m)", "get_ill(X)", ILL_BABY, "stay(m, home)", "happy(X)"]
    for i in range(6):
        for text in queries:
            answers = {
                ask(babies, (i,), text, s)
                for s in (Semantics.AR, Semantics.IAR, Semantics.ICR)
            }
            assert len(answers) == 1, (i, text)


def test_entailment_chain_on_random_scopes():
    rng = random.Random(71)
    checked = 0
    while checked < 120:
        kb = parse_kb(random_kb_text(rng))
        repairs = compute_repairs(kb)
        rules = skolemized_rules(kb)
        for _ in range(5):
            scope = rng.sample(range(len(repairs)), rng.randint(1, len(repairs)))
            query = parse_query(random_query_text(rng))
            iar = entails_scoped(repairs, scope, query, rules, Semantics.IAR)
            icr = entails_scoped(repairs, scope, query, rules, Semantics.ICR)
            ar = entails_scoped(repairs, scope, query, rules, Semantics.AR)
            if iar:
                assert icr
            if icr:
                assert ar
            checked += 1


def test_ar_holds_on_sub_scopes():
    rng = random.Random(73)
    found = 0
    for _ in range(60):
        kb = parse_kb(random_kb_text(rng))
        repairs = compute_repairs(kb)
        rules = skolemized_rules(kb)
        scope = rng.sample(range(len(repairs)), rng.randint(1, len(repairs)))
        query = parse_query(random_query_text(rng))
        if not entails_scoped(repairs, scope, query, rules, Semantics.AR):
            continue
        found += 1
        sub = rng.sample(scope, rng.randint(1, len(scope)))
        assert entails_scoped(repairs, sub, query, rules, Semantics.AR)
    assert found >= 5
