import json

import pytest

from multideal import (
    ContractError,
    LinearAdditive,
    MaxOfDeals,
    QuantityTable,
    ScenarioParseError,
    SchemaVersionError,
    TargetQuantity,
    gen_job_hunt,
    gen_target_quantity,
    load_scenario,
    loads_scenario,
    pilot_templates,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


# --- generators ---------------------------------------------------------------


def test_job_hunt_structure():
    s = gen_job_hunt(3, seed=7)
    assert s.n_edges == 3
    assert isinstance(s.combiner, MaxOfDeals)
    for sub in s.subnegotiations:
        names = [i.name for i in sub.space.issues]
        assert names == ["days", "salary"]
        assert sub.space.issues[0].values == tuple(range(6))
        assert isinstance(sub.center_utility, LinearAdditive)
        assert isinstance(sub.edge_utility, LinearAdditive)


def test_job_hunt_monotone_and_endpoint_normalized():
    s = gen_job_hunt(4, seed=11)
    for sub in s.subnegotiations:
        c_days, c_salary = sub.center_utility.valuations
        e_days, e_salary = sub.edge_utility.valuations
        # job hunter: fewer office days and more salary are strictly better
        assert all(a > b for a, b in zip(c_days, c_days[1:]))
        assert all(a < b for a, b in zip(c_salary, c_salary[1:]))
        # employer preferences run the other way
        assert all(a < b for a, b in zip(e_days, e_days[1:]))
        assert all(a > b for a, b in zip(e_salary, e_salary[1:]))
        for table in (c_days, e_salary):
            assert table[0] == 1.0 and table[-1] == 0.0
        for table in (c_salary, e_days):
            assert table[0] == 0.0 and table[-1] == 1.0


def test_job_hunt_salary_grids_independent():
    s = gen_job_hunt(3, seed=3)
    grids = {sub.space.issues[1].values for sub in s.subnegotiations}
    assert len(grids) > 1


def test_job_hunt_deterministic_and_seed_sensitive():
    assert gen_job_hunt(3, seed=5) == gen_job_hunt(3, seed=5)
    assert gen_job_hunt(3, seed=5) != gen_job_hunt(3, seed=6)


def test_target_quantity_structure():
    s = gen_target_quantity(3, seed=2, target=10, q_max=10)
    assert isinstance(s.combiner, TargetQuantity)
    assert s.combiner.target == 10
    for sub in s.subnegotiations:
        assert [i.name for i in sub.space.issues] == ["quantity"]
        assert isinstance(sub.center_utility, QuantityTable)
        edge = sub.edge_utility
        values = [edge.table[q] for q in range(11)]
        assert values[0] == 0.0 and values[-1] == 1.0
        assert all(a <= b for a, b in zip(values, values[1:]))


def test_target_quantity_deterministic():
    assert gen_target_quantity(2, seed=9) == gen_target_quantity(2, seed=9)


def test_generator_validation():
    with pytest.raises(ContractError):
        gen_job_hunt(0, seed=1)
    with pytest.raises(ContractError):
        gen_target_quantity(2, seed=1, target=0)


# --- file format ----------------------------------------------------------------


@pytest.mark.parametrize(
    "scenario",
    [gen_job_hunt(3, seed=1), gen_target_quantity(3, seed=1)],
    ids=["jobhunt", "targetqty"],
)
def test_round_trip_is_exact(tmp_path, scenario):
    path = tmp_path / "s.json"
    save_scenario(scenario, path)
    loaded = load_scenario(path)
    assert loaded == scenario
    # a second save is byte-identical (canonical form)
    path2 = tmp_path / "s2.json"
    save_scenario(loaded, path2)
    assert path.read_text() == path2.read_text()


def test_dict_round_trip():
    s = gen_job_hunt(2, seed=4)
    assert scenario_from_dict(scenario_to_dict(s)) == s


def test_truncated_file_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    save_scenario(gen_job_hunt(2, seed=4), tmp_path / "ok.json")
    text = (tmp_path / "ok.json").read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(ScenarioParseError) as exc:
        load_scenario(path)
    assert "char" in exc.value.location


def test_wrong_schema_version():
    data = scenario_to_dict(gen_job_hunt(1, seed=1))
    data["schema"] = "multideal/999"
    with pytest.raises(SchemaVersionError):
        scenario_from_dict(data)


def test_bad_weight_sum_names_subnegotiation():
    data = scenario_to_dict(gen_job_hunt(2, seed=1))
    data["subnegotiations"][1]["edge_utility"]["weights"] = ["0.4", "0.4"]
    with pytest.raises(ScenarioParseError) as exc:
        scenario_from_dict(data)
    assert "subnegotiations[1]" in exc.value.location
    assert "0.8" in str(exc.value)


def test_near_one_weights_are_renormalized():
    data = scenario_to_dict(gen_job_hunt(1, seed=1))
    data["subnegotiations"][0]["center_utility"]["weights"] = ["0.5000001", "0.5"]
    s = scenario_from_dict(data)
    assert sum(s.subnegotiations[0].center_utility.weights) == pytest.approx(1.0, abs=1e-9)


def test_missing_field_location():
    data = scenario_to_dict(gen_job_hunt(1, seed=1))
    del data["subnegotiations"][0]["issues"]
    with pytest.raises(ScenarioParseError) as exc:
        scenario_from_dict(data)
    assert exc.value.location == "$.subnegotiations[0]"


def test_quantity_table_missing_quantity():
    data = scenario_to_dict(gen_target_quantity(1, seed=1))
    table = data["subnegotiations"][0]["edge_utility"]["table"]
    table.pop(sorted(table)[0])
    with pytest.raises(ScenarioParseError):
        scenario_from_dict(data)


def test_loads_rejects_non_object():
    with pytest.raises(ScenarioParseError):
        loads_scenario(json.dumps([1, 2, 3]))


# --- pilot templates ---------------------------------------------------------------


def test_pilot_templates_load():
    templates = pilot_templates()
    assert len(templates) == 3
    ids = {t.id for t in templates}
    assert ids == {"trade", "island_survival", "grocery"}
    for t in templates:
        assert t.n_edges == 1  # bilateral pilots


def test_grocery_template_size():
    grocery = next(t for t in pilot_templates() if t.id == "grocery")
    assert grocery.subnegotiations[0].space.n_outcomes >= 81
    assert "briefing" in grocery.metadata
