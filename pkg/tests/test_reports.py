import math

from kantorovich.reports import format_value, write_csv_report


class TestFormatValue:
    def test_seventeen_significant_digits(self):
        assert format_value(1.0 / 3.0) == "0.33333333333333331"

    def test_infinity_sentinels(self):
        assert format_value(math.inf) == "inf"
        assert format_value(-math.inf) == "-inf"

    def test_booleans_and_none(self):
        assert format_value(True) == "true"
        assert format_value(False) == "false"
        assert format_value(None) == ""

    def test_integers(self):
        assert format_value(45) == "45"


class TestWriteCsvReport:
    def test_header_only(self, tmp_path):
        p = tmp_path / "empty.csv"
        write_csv_report(p, ["a", "b"], [])
        assert p.read_bytes() == b"a,b\n"

    def test_single_row_stable_bytes(self, tmp_path):
        row = {"n": 5, "l1_error": 0.08612345678901234}
        pa, pb = tmp_path / "r1.csv", tmp_path / "r2.csv"
        write_csv_report(pa, ["n", "l1_error"], [row])
        write_csv_report(pb, ["n", "l1_error"], [row])
        assert pa.read_bytes() == pb.read_bytes()
        assert pa.read_bytes() == b"n,l1_error\n5,0.086123456789012343\n"

    def test_infinite_cell(self, tmp_path):
        p = tmp_path / "inf.csv"
        write_csv_report(p, ["psnr"], [{"psnr": math.inf}])
        assert b"inf" in p.read_bytes()

    def test_lf_endings_and_preamble(self, tmp_path):
        p = tmp_path / "pre.csv"
        write_csv_report(p, ["x"], [{"x": 1}], preamble=["config seed=42"])
        data = p.read_bytes()
        assert b"\r" not in data
        assert data.startswith(b"# config seed=42\n")

    def test_missing_field_is_empty(self, tmp_path):
        p = tmp_path / "m.csv"
        write_csv_report(p, ["a", "b"], [{"a": 1}])
        assert p.read_bytes() == b"a,b\n1,\n"
