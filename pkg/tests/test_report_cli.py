import json

import pytest
from click.testing import CliRunner

from climarma.cli import main
from climarma.exceptions import AnalysisStageError, RangeError
from climarma.ingest import bundled_csv_path
from climarma.report import AnalysisConfig, run_analysis

PAPER_ORDERS = ((1, 0, 0), (1, 0, 1), (1, 1, 1), (1, 2, 0))


@pytest.fixture(scope="module")
def gistemp_csv_text():
    return bundled_csv_path().read_text(encoding="utf-8")


@pytest.fixture(scope="module")
def paper_bundle(gistemp_csv_text):
    config = AnalysisConfig(
        csv_text=gistemp_csv_text,
        orders=PAPER_ORDERS,
        include_constant=False,
        formats=("text", "json"),
        horizon=5,
        seed=1,
    )
    return run_analysis(config)


class TestConfigValidation:
    def test_orders_xor_auto(self, gistemp_csv_text):
        with pytest.raises(RangeError):
            AnalysisConfig(csv_text=gistemp_csv_text)
        with pytest.raises(RangeError):
            AnalysisConfig(csv_text=gistemp_csv_text, orders=((1, 0, 0),), auto={"max_p": 1})

    def test_empty_orders_rejected_before_compute(self, gistemp_csv_text):
        with pytest.raises(RangeError):
            AnalysisConfig(csv_text=gistemp_csv_text, orders=())

    def test_unknown_format(self, gistemp_csv_text):
        with pytest.raises(RangeError):
            AnalysisConfig(csv_text=gistemp_csv_text, orders=((1, 0, 0),), formats=("pdf",))

    def test_input_xor_text(self):
        with pytest.raises(RangeError):
            AnalysisConfig(orders=((1, 0, 0),))


class TestRunAnalysis:
    def test_document_structure(self, paper_bundle):
        doc = paper_bundle.document
        assert doc["schema_version"] == "1"
        assert [m["label"] for m in doc["models"]] == [
            "AR(1)", "ARMA(1,1)", "ARIMA(1,1,1)", "ARIMA(1,2,0)",
        ]
        assert set(doc["correlograms"]) == {"levels", "diff1", "diff2"}
        assert doc["adf"]["reject_unit_root"] is False

    def test_comparison_ranks_arma11_over_arimas_on_residual(self, paper_bundle):
        rows = paper_bundle.document["comparison"]["rows"]
        rank = {r["label"]: r["residual_rank"] for r in rows}
        assert rank["ARMA(1,1)"] < rank["ARIMA(1,1,1)"]
        assert rank["ARMA(1,1)"] < rank["ARIMA(1,2,0)"]

    def test_forecast_uses_residual_winner(self, paper_bundle):
        assert paper_bundle.document["forecast"]["model"] == "ARMA(1,1)"
        assert len(paper_bundle.document["forecast"]["point"]) == 5

    def test_json_deterministic_across_runs(self, gistemp_csv_text):
        config = AnalysisConfig(
            csv_text=gistemp_csv_text, orders=((1, 0, 0),), formats=("json",), seed=3
        )
        a = run_analysis(config).json_text
        b = run_analysis(config).json_text
        assert a == b

    def test_svg_does_not_change_json(self, gistemp_csv_text):
        base = AnalysisConfig(csv_text=gistemp_csv_text, orders=((1, 0, 0),), seed=3)
        with_svg = AnalysisConfig(
            csv_text=gistemp_csv_text, orders=((1, 0, 0),), formats=("json", "svg"), seed=3
        )
        a = run_analysis(base)
        b = run_analysis(with_svg)
        assert a.json_text == b.json_text
        assert not a.figures
        assert b.figures  # svg view exists alongside identical content
        for svg in b.figures.values():
            assert svg.lstrip().startswith("<?xml")
            assert 'version="1.1"' in svg

    def test_stage_failure_manifest(self, tmp_path):
        config = AnalysisConfig(
            csv_text="Year,Anomaly\n1880,-0.17\n1881,oops\n",
            orders=((1, 0, 0),),
            out_dir=str(tmp_path),
        )
        with pytest.raises(AnalysisStageError) as exc_info:
            run_analysis(config)
        assert exc_info.value.stage == "ingest"
        manifest = json.loads((tmp_path / "report.json").read_text())
        assert manifest["failure"]["stage"] == "ingest"
        assert "row 3" in manifest["failure"]["error"]

    def test_text_report_contents(self, paper_bundle):
        text = paper_bundle.text_report
        assert "ADF[c]" in text
        assert "non-stationary" in text
        assert "ARMA(1,1)" in text
        assert "Forecast from ARMA(1,1)" in text

    def test_auto_config_runs(self, gistemp_csv_text):
        config = AnalysisConfig(
            csv_text=gistemp_csv_text,
            auto={"max_p": 1, "max_d": 2, "max_q": 1, "min_d": 2},
        )
        doc = run_analysis(config).document
        assert doc["selection"]["best"] == "ARIMA(1,2,0)"
        assert doc["models"][0]["label"] == "ARIMA(1,2,0)"

    def test_write_bundle(self, gistemp_csv_text, tmp_path):
        config = AnalysisConfig(
            csv_text=gistemp_csv_text,
            orders=((1, 0, 0),),
            formats=("text", "json", "svg"),
            out_dir=str(tmp_path),
        )
        run_analysis(config)
        assert (tmp_path / "report.json").exists()
        assert (tmp_path / "report.txt").exists()
        assert list(tmp_path.glob("*.svg"))


class TestCli:
    @pytest.fixture()
    def csv_file(self, tmp_path, gistemp_csv_text):
        p = tmp_path / "data.csv"
        p.write_text(gistemp_csv_text)
        return str(p)

    def test_bundled_path(self):
        result = CliRunner().invoke(main, ["bundled-path"])
        assert result.exit_code == 0
        assert result.output.strip().endswith("gistemp_annual.csv")

    def test_ingest_check(self, csv_file):
        result = CliRunner().invoke(main, ["ingest-check", csv_file])
        assert result.exit_code == 0
        assert "n=143" in result.output

    def test_ingest_check_error_carries_row(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("Year,Anomaly\n1950,0.1\n1950,0.2\n")
        result = CliRunner().invoke(main, ["ingest-check", str(p)])
        assert result.exit_code != 0
        assert "duplicate year 1950" in result.output

    def test_acf_json(self, csv_file):
        result = CliRunner().invoke(main, ["acf", csv_file, "--lags", "5", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["kind"] == "ACF"
        assert payload["values"][0] == 1.0

    def test_pacf_text(self, csv_file):
        result = CliRunner().invoke(main, ["pacf", csv_file, "--lags", "5"])
        assert result.exit_code == 0
        assert "PACF" in result.output

    def test_adf(self, csv_file):
        result = CliRunner().invoke(main, ["adf", csv_file])
        assert result.exit_code == 0
        assert "non-stationary" in result.output

    def test_fit(self, csv_file):
        result = CliRunner().invoke(
            main, ["fit", csv_file, "--order", "1,0,1", "--no-constant", "--format", "json"]
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["label"] == "ARMA(1,1)"
        assert abs(payload["ar"][0] - 0.9938) < 0.01

    def test_fit_bad_order_spec(self, csv_file):
        result = CliRunner().invoke(main, ["fit", csv_file, "--order", "1-0-1"])
        assert result.exit_code != 0

    def test_auto(self, csv_file):
        result = CliRunner().invoke(
            main,
            ["auto", csv_file, "--max-p", "1", "--max-d", "2", "--max-q", "1", "--min-d", "2"],
        )
        assert result.exit_code == 0
        assert "best: ARIMA(1,2,0)" in result.output

    def test_diagnose(self, csv_file):
        result = CliRunner().invoke(
            main, ["diagnose", csv_file, "--order", "1,0,1", "--no-constant"]
        )
        assert result.exit_code == 0
        assert "max |residual|" in result.output

    def test_forecast(self, csv_file):
        result = CliRunner().invoke(
            main,
            ["forecast", csv_file, "--order", "1,0,0", "--no-constant", "--horizon", "3"],
        )
        assert result.exit_code == 0
        assert "2025" in result.output

    def test_report_writes_bundle(self, csv_file, tmp_path):
        out = tmp_path / "bundle"
        result = CliRunner().invoke(
            main,
            [
                "report", csv_file,
                "--order", "1,0,0", "--order", "1,0,1", "--no-constant",
                "--format", "json", "--format", "svg",
                "--horizon", "4", "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "report.json").read_text())
        assert doc["forecast"]["model"] == "ARMA(1,1)"
        assert (out / "forecast.svg").exists()

    def test_report_requires_orders_or_auto(self, csv_file):
        result = CliRunner().invoke(main, ["report", csv_file])
        assert result.exit_code != 0
        assert "either --order" in result.output
