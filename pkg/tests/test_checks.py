import json

import pytest

from engine.errors import ConfigurationError, NotArtinianError, NotGorensteinError, ResourceCapExceeded
from verify.checks import _guarded, golden_assertions, run_check
from verify.fixtures import ARTINIAN_FIXTURES, GORENSTEIN_FIXTURES, Instance, fixture_ring, ideal_instances
from verify.report import CHECK_CATALOG, PAPER_REFS, CheckSpec, Report


def spec(check_id, ring=None, **options):
    return CheckSpec(check_id, ring=fixture_ring(ring) if ring else None, **options)


def test_aliases_resolve_to_catalog_entries():
    assert spec("thm-3.9-census", "exterior").check_id == "thm-3.9"
    assert spec("lemma-2.7", "exterior").check_id == "lemma-2.3"
    assert spec("remark-3.4", "chain").statement == CHECK_CATALOG["prop-3.2"]


@pytest.mark.parametrize("options", [
    {"check_id": "thm-4.1"},
    {"check_id": "thm-3.9"},
    {"check_id": "prop-3.2", "source": "everything"},
    {"check_id": "examples", "window": (2, 1)},
    {"check_id": "examples", "count": 0},
    {"check_id": "examples", "seed": -1},
])
def test_invalid_specs(options):
    with pytest.raises(ConfigurationError):
        CheckSpec(**options)


def test_report_verdicts():
    report = Report("thm-3.9", "s")
    assert report.finalize().verdict == "skipped"
    report.instances_tested = 3
    assert report.finalize().verdict == "pass"
    assert report.exit_code == 0
    report.counterexamples.append({"ring": "R", "module": "I", "measured": {}})
    assert report.finalize().verdict == "fail"
    assert report.exit_code == 1
    report.engine_disagreements.append({"ring": "R", "module": "I", "detail": "x"})
    assert report.exit_code == 4


def test_capped_instances_exit_three(exterior):
    def capped(instance, outcome):
        raise ResourceCapExceeded("degree 65 exceeds the cap of 64")

    outcome = _guarded(capped, exterior, Instance(0, "(x)", ()))
    assert outcome.skipped[0]["reason"].startswith("resource cap")
    report = Report("thm-3.9", "s", instances_tested=2, skipped=outcome.skipped).finalize()
    assert report.verdict == "pass"
    assert report.exit_code == 3
    report.counterexamples.append({"ring": "R", "module": "I", "measured": {}})
    assert report.exit_code == 1


def test_ordinary_skips_keep_exit_zero():
    report = Report("thm-3.9", "s", instances_tested=1, skipped=[{"ring": "R", "module": "(0)", "reason": "zero ideal"}])
    assert report.exit_code == 0


def test_reports_name_their_source_statement():
    report = run_check(spec("prop-3.2", "chain", source="monomial_exhaustive"))
    payload = json.loads(report.to_json())
    assert payload["paper_ref"] == "Proposition 3.2; Remark 3.4"
    assert payload["statement"] == CHECK_CATALOG["prop-3.2"]
    assert set(PAPER_REFS) == set(CHECK_CATALOG)
    assert spec("lemma-3.6", "exterior").paper_ref == PAPER_REFS["lemma-2.3"]


def test_report_json_leaves_out_timings():
    report = Report("oracle", "s", wall_ms=12.5).finalize()
    assert "wall_ms" not in json.loads(report.to_json())
    assert json.loads(report.to_json(timings=True))["wall_ms"] == 12.5


def test_fixture_instances(exterior, chain):
    labels = [inst.label for inst in ideal_instances(exterior)]
    assert labels == ["(0)", "(x)", "(y)", "(x*y)", "(x, y)", "(1)"]
    assert len(ideal_instances(exterior, "monomial_exhaustive")) == 6
    assert len(ideal_instances(chain, "monomial_exhaustive")) == 5
    random = ideal_instances(exterior, "random", seed=5, count=12)
    assert len(random) == 12
    assert [i.index for i in random] == list(range(12))


def test_non_artinian_census_is_rejected(node):
    with pytest.raises(NotArtinianError):
        ideal_instances(node, "monomial_exhaustive")


@pytest.mark.parametrize("name", GORENSTEIN_FIXTURES)
def test_syzygies_of_trace_ideals_are_never_rigid(name):
    report = run_check(spec("thm-3.9", name, source="monomial_exhaustive", window=(-1, 2)))
    assert report.verdict == "pass"
    assert report.counterexamples == []
    assert report.engine_disagreements == []
    assert report.observations["shifts_tested"] > 0
    # the zero ideal and R itself are skipped with a reason
    assert len(report.skipped) == 2


def test_exterior_census_counts_every_proper_ideal():
    report = run_check(spec("thm-3.9", "exterior", source="monomial_exhaustive", window=(0, 1)))
    assert report.instances_tested == 4
    assert report.exit_code == 0


def test_thm_3_9_needs_gorenstein():
    with pytest.raises(NotGorensteinError):
        run_check(spec("thm-3.9", "square-of-max"))


def test_chain_ring_ideals_are_all_trace_ideals():
    report = run_check(spec("prop-3.2", "chain", source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.instances_tested == 5
    assert report.observations["trace_ideals"] == 5
    assert report.observations["gorenstein"] is True


def test_non_gorenstein_ring_has_non_trace_ideals():
    report = run_check(spec("prop-3.2", "square-of-max", source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.observations["gorenstein"] is False
    assert report.observations["non_trace_ideals"] >= 1
    assert report.engine_disagreements == []


@pytest.mark.parametrize("name", GORENSTEIN_FIXTURES)
def test_rigid_ideals_are_free(name):
    report = run_check(spec("cor-3.12", name, source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.engine_disagreements == []
    assert report.observations["bounded_arc_check"] is True


@pytest.mark.parametrize("name", ARTINIAN_FIXTURES)
def test_oracle_agrees_on_monomial_ideals(name):
    report = run_check(spec("oracle", name, source="monomial_exhaustive"))
    assert report.engine_disagreements == []
    assert report.exit_code == 0
    assert report.observations["comparisons"] > 0


def test_oracle_needs_artinian_ring():
    with pytest.raises(NotArtinianError):
        run_check(spec("oracle", "node"))


def test_lemma_suite_on_the_node():
    report = run_check(spec("lemma-2.3", "node"))
    assert report.verdict == "pass"
    assert report.instances_tested >= 6
    assert report.observations["trace_modules"] > 0


@pytest.mark.parametrize("name", ARTINIAN_FIXTURES)
def test_lemma_suite_on_artinian_fixtures(name):
    report = run_check(spec("lemma-2.3", name, source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.engine_disagreements == []
    assert report.observations["finite_length_pairs"] > 0


def test_non_rigidity_fixtures():
    report = run_check(spec("prop-3.8"))
    assert report.verdict == "pass"
    assert report.instances_tested == 5
    assert report.skipped == []
    assert report.observations == {"grade_two": 2, "grade_zero": 3}


def test_non_rigidity_over_a_gorenstein_ring():
    report = run_check(spec("prop-3.8", "exterior", source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.observations["grade_zero"] == 4


def test_non_rigidity_needs_gorenstein_or_polynomial_ring():
    with pytest.raises(NotGorensteinError):
        run_check(spec("prop-3.8", "node"))


def test_golden_catalog():
    goldens = golden_assertions()
    assert len(goldens) == 17
    assert sum(1 for g in goldens if g.ring == "semigroup") == 12


@pytest.mark.slow
def test_worked_examples_pass():
    report = run_check(spec("examples"))
    assert report.verdict == "pass"
    assert report.instances_tested == 17
    assert report.counterexamples == []
    assert set(report.observations) <= {"trace_is_0", "trace_is_m", "trace_is_R"}


def test_reports_are_deterministic():
    first = run_check(spec("thm-3.9", "exterior", source="random", seed=11, count=15))
    second = run_check(spec("thm-3.9", "exterior", source="random", seed=11, count=15))
    assert first.to_json() == second.to_json()


def test_worker_threads_do_not_change_reports():
    serial = run_check(spec("cor-3.12", "exterior", source="random", seed=2, count=10))
    threaded = run_check(spec("cor-3.12", "exterior", source="random", seed=2, count=10, jobs=3))
    assert serial.to_json() == threaded.to_json()


def test_default_window_reaches_second_cosyzygies():
    assert CheckSpec("thm-3.9", ring=fixture_ring("exterior")).window == (-2, 2)
    report = run_check(spec("thm-3.9", "exterior", source="monomial_exhaustive"))
    assert report.verdict == "pass"
    assert report.bounds["window"] == [-2, 2]


@pytest.mark.slow
def test_thm_3_9_random_census():
    report = run_check(spec("thm-3.9", "exterior", source="random", seed=0, count=200, window=(-1, 2)))
    assert report.verdict == "pass"
    assert report.counterexamples == []
    assert report.engine_disagreements == []
    assert report.instances_tested + len(report.skipped) == 200


@pytest.mark.slow
def test_lemma_suite_census():
    report = run_check(spec("lemma-2.3", "exterior", source="random", seed=0, count=200))
    assert report.verdict == "pass"
    assert report.engine_disagreements == []
    assert report.instances_tested >= 500
    assert report.observations["finite_length_pairs"] > 0
