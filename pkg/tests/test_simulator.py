import csv
import json

import numpy as np
import pytest

from privacy_sentinel.cli import main as cli_main
from privacy_sentinel.config import EngineConfig
from privacy_sentinel.errors import ValidationError
from privacy_sentinel.model import SurveillanceAttribute as SA
from privacy_sentinel.service import Engine, create_app
from privacy_sentinel.simulator import (
    AgentSpec,
    HttpBackend,
    ScenarioSpec,
    SimConfig,
    UinSpec,
    canonical_json,
    run_simulation,
    synthesize_post,
)

WORKPLACE_SAS = frozenset({SA.WORK_LOCATION, SA.EMPLOYMENT_STATUS, SA.NEGATIVE})


def workplace_scenario(probability=0.6, consequences=(0.463, 0.444, 0.093, 0, 0)):
    return ScenarioSpec(
        name="office-vent",
        sas=WORKPLACE_SAS,
        audience="Work colleagues",
        incidents=(
            UinSpec(uin="Job loss", probability=probability,
                    consequences=consequences),
        ),
    )


def one_agent(heed=0.0, rate=1.0, mix=None):
    return AgentSpec(
        id="agent-1",
        post_rate=rate,
        heed_probability=heed,
        scenario_mix=mix or {"office-vent": 1.0},
    )


def small_config(steps=50, seed=0, heed=0.0, scenario=None, engine=None):
    return SimConfig(
        scenarios=(scenario or workplace_scenario(),),
        agents=(one_agent(heed=heed),),
        steps=steps,
        seed=seed,
        engine=engine or EngineConfig(),
    )


class TestSpecs:
    def test_uin_spec_validates_distributions(self):
        with pytest.raises(ValidationError):
            UinSpec(uin="x", probability=1.5, consequences=(1, 0, 0, 0, 0))
        with pytest.raises(ValidationError):
            UinSpec(uin="x", probability=0.5, consequences=(0.5, 0, 0, 0, 0))
        with pytest.raises(ValidationError):
            UinSpec(uin="x", probability=0.5, consequences=(2, -1, 0, 0, 0))

    def test_true_index_extremes_and_reference(self):
        sure_worst = UinSpec("x", 1.0, (1, 0, 0, 0, 0))
        sure_benign = UinSpec("x", 1.0, (0, 0, 0, 0, 1))
        assert sure_worst.true_index == 1.0
        assert sure_benign.true_index == 0.0
        reference = UinSpec("x", 1.0, (0.463, 0.444, 0.093, 0, 0))
        assert reference.true_index == pytest.approx(0.8425)

    def test_scenario_constraints(self):
        with pytest.raises(ValidationError):
            ScenarioSpec(name="", sas=WORKPLACE_SAS, audience="Public", incidents=())
        with pytest.raises(ValidationError):
            ScenarioSpec(name="s", sas=frozenset(), audience="Public", incidents=())
        with pytest.raises(ValidationError):
            ScenarioSpec(
                name="s",
                sas=WORKPLACE_SAS,
                audience="Public",
                incidents=(
                    UinSpec("a", 0.7, (1, 0, 0, 0, 0)),
                    UinSpec("b", 0.7, (1, 0, 0, 0, 0)),
                ),
            )

    def test_agent_constraints(self):
        with pytest.raises(ValidationError):
            AgentSpec(id="a", post_rate=-1, heed_probability=0, scenario_mix={"s": 1})
        with pytest.raises(ValidationError):
            AgentSpec(id="a", post_rate=1, heed_probability=2, scenario_mix={"s": 1})
        with pytest.raises(ValidationError):
            AgentSpec(id="a", post_rate=1, heed_probability=0, scenario_mix={})

    def test_config_cross_references(self):
        with pytest.raises(ValidationError):
            SimConfig(
                scenarios=(workplace_scenario(),),
                agents=(one_agent(mix={"no-such-scenario": 1.0}),),
                steps=5,
            )
        with pytest.raises(ValidationError):
            SimConfig(
                scenarios=(workplace_scenario(), workplace_scenario()),
                agents=(one_agent(),),
                steps=5,
            )
        with pytest.raises(ValidationError):
            small_config(steps=0)

    def test_from_json_round_trip(self):
        doc = {
            "scenarios": [
                {
                    "name": "office-vent",
                    "sas": ["Work location", "Employment status", "Negative"],
                    "audience": "Work colleagues",
                    "incidents": [
                        {
                            "uin": "Job loss",
                            "probability": 0.6,
                            "consequences": [0.463, 0.444, 0.093, 0, 0],
                        }
                    ],
                }
            ],
            "agents": [
                {"id": "agent-1", "post_rate": 1.0, "heed_probability": 0.0,
                 "scenario_mix": {"office-vent": 1.0}}
            ],
            "steps": 10,
            "seed": 3,
        }
        config = SimConfig.from_json(doc)
        assert config.seed == 3
        assert config.scenarios[0].sas == WORKPLACE_SAS
        assert config.scenarios[0].incidents[0].true_index == pytest.approx(0.8425)

    def test_from_json_rejects_malformed_documents(self):
        with pytest.raises(ValidationError):
            SimConfig.from_json({"scenarios": []})


class TestSynthesizePost:
    def test_annotations_pin_the_scenario_attributes(self):
        rng = np.random.default_rng(1)
        fields = synthesize_post(workplace_scenario(), rng)
        assert set(fields["annotations"]) == {
            "Work location", "Employment status", "Negative",
        }

    def test_same_stream_state_gives_identical_posts(self):
        first = synthesize_post(workplace_scenario(), np.random.default_rng(9))
        second = synthesize_post(workplace_scenario(), np.random.default_rng(9))
        assert first == second


class TestRunLoop:
    def test_identical_seeds_give_identical_reports(self):
        config = small_config(steps=30, seed=11)
        assert canonical_json(run_simulation(config)) == canonical_json(
            run_simulation(config)
        )

    def test_different_seeds_diverge(self):
        base = canonical_json(run_simulation(small_config(steps=30, seed=1)))
        other = canonical_json(run_simulation(small_config(steps=30, seed=2)))
        assert base != other

    def test_certain_catastrophe_estimates_exactly_one(self):
        scenario = workplace_scenario(probability=1.0,
                                      consequences=(1, 0, 0, 0, 0))
        report = run_simulation(small_config(steps=50, scenario=scenario))
        (row,) = report["scenario_stats"]
        assert row["estimate"] == 1.0
        assert row["covered"] is True
        assert row["n"] == report["totals"]["reports"] > 0

    def test_estimate_approaches_the_reference_truth(self):
        report = run_simulation(small_config(steps=200, seed=4))
        (row,) = report["scenario_stats"]
        assert row["true_index"] == pytest.approx(0.8425)
        assert row["n"] > 80
        assert row["abs_error"] < 0.05

    def test_totals_are_consistent(self):
        report = run_simulation(small_config(steps=80, seed=5, heed=0.3))
        totals = report["totals"]
        assert totals["posts"] == totals["published"] + totals["retracted"]
        assert totals["reports"] <= totals["published"]
        assert totals["posts"] == report["agents"][0]["posts"]

    def test_mean_error_does_not_grow_with_more_evidence(self):
        short_errors, long_errors = [], []
        for seed in range(30):
            for steps, out in ((40, short_errors), (160, long_errors)):
                report = run_simulation(small_config(steps=steps, seed=seed))
                (row,) = report["scenario_stats"]
                assert row["abs_error"] is not None
                out.append(row["abs_error"])
        assert np.mean(long_errors) <= np.mean(short_errors)

    def test_unheeded_warnings_drive_the_threshold_up(self):
        scenario = workplace_scenario(probability=0.5,
                                      consequences=(1, 0, 0, 0, 0))
        config = small_config(
            steps=80, heed=0.0, scenario=scenario, engine=EngineConfig(tau=5)
        )
        report = run_simulation(config)
        trajectory = report["agents"][0]["phi_trajectory"]
        assert trajectory[-1] == pytest.approx(0.95)
        assert trajectory == sorted(trajectory)

    def test_heeded_warnings_drive_the_threshold_down(self):
        scenario = workplace_scenario(probability=1.0,
                                      consequences=(1, 0, 0, 0, 0))
        config = small_config(
            steps=80, heed=1.0, scenario=scenario, engine=EngineConfig(tau=5)
        )
        report = run_simulation(config)
        trajectory = report["agents"][0]["phi_trajectory"]
        assert trajectory[-1] == pytest.approx(0.05)
        assert trajectory == sorted(trajectory, reverse=True)

    def test_trace_csv_records_each_post(self, tmp_path):
        trace = tmp_path / "trace.csv"
        report = run_simulation(small_config(steps=20, seed=6), trace_path=trace)
        with trace.open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["step", "agent", "post_id", "warned", "action",
                           "incident", "consequence", "phi"]
        assert len(rows) - 1 == report["totals"]["posts"]

    def test_canonical_json_drops_only_the_runtime(self):
        report = run_simulation(small_config(steps=5))
        doc = json.loads(canonical_json(report))
        assert "runtime_seconds" not in doc
        assert set(report) - set(doc) == {"runtime_seconds"}


class TestHttpParity:
    def test_http_backend_matches_the_library_run(self):
        from fastapi.testclient import TestClient

        config = small_config(steps=25, seed=8, heed=0.4)
        direct = run_simulation(config)

        engine = Engine(config=config.engine)
        try:
            with TestClient(create_app(engine=engine)) as client:
                backend = HttpBackend(client=client)
                proxied = run_simulation(config, backend=backend)
        finally:
            engine.close()
        assert canonical_json(proxied) == canonical_json(direct)

    def test_http_backend_raises_on_service_errors(self):
        from fastapi.testclient import TestClient

        engine = Engine()
        try:
            with TestClient(create_app(engine=engine)) as client:
                backend = HttpBackend(client=client)
                with pytest.raises(ValidationError):
                    backend.decide("post-000404", "publish")
        finally:
            engine.close()


class TestCli:
    def write_config(self, tmp_path, steps=15):
        doc = {
            "scenarios": [
                {
                    "name": "office-vent",
                    "sas": ["Work location", "Employment status", "Negative"],
                    "audience": "Work colleagues",
                    "incidents": [
                        {
                            "uin": "Job loss",
                            "probability": 0.6,
                            "consequences": [0.463, 0.444, 0.093, 0, 0],
                        }
                    ],
                }
            ],
            "agents": [
                {"id": "agent-1", "post_rate": 1.0, "heed_probability": 0.0,
                 "scenario_mix": {"office-vent": 1.0}}
            ],
            "steps": steps,
        }
        path = tmp_path / "sim.json"
        path.write_text(json.dumps(doc))
        return path

    def test_simulate_writes_the_report(self, tmp_path, capsys):
        config_path = self.write_config(tmp_path)
        out = tmp_path / "report.json"
        code = cli_main(
            ["simulate", "--config", str(config_path), "--out", str(out),
             "--seed", "5", "--emit-csv"]
        )
        assert code == 0
        report = json.loads(out.read_bytes())
        assert report["seed"] == 5
        assert (tmp_path / "report.csv").exists()
        assert "incident reports" in capsys.readouterr().out

    def test_seed_override_matches_direct_run(self, tmp_path):
        config_path = self.write_config(tmp_path)
        out = tmp_path / "report.json"
        cli_main(
            ["simulate", "--config", str(config_path), "--out", str(out),
             "--seed", "21"]
        )
        direct = run_simulation(small_config(steps=15, seed=21))
        assert out.read_bytes() == canonical_json(direct)

    def test_bad_config_exits_nonzero(self, tmp_path, capsys):
        bad = tmp_path / "sim.json"
        bad.write_text("{broken")
        out = tmp_path / "report.json"
        code = cli_main(["simulate", "--config", str(bad), "--out", str(out)])
        assert code == 2
        assert "error:" in capsys.readouterr().err
