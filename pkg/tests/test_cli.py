import subprocess
import sys

import pytest

from golden_cases import GEN, REPORTS, generate, run


@pytest.fixture(scope="module")
def outputs(tmp_path_factory):
    return generate(tmp_path_factory.mktemp("cli"))


@pytest.mark.parametrize("name", sorted({**GEN, **REPORTS}))
def test_golden_bytes(name, outputs, golden):
    assert outputs[name].encode("ascii") == (golden / name).read_bytes()


def test_spec_workflow(tmp_path):
    path = str(tmp_path / "i4.inc")
    assert run(["gen", "inversive", "--q", "4", "--ovoid", "elliptic", "-o", path])[0] == 0
    assert run(["verify", "inversive", path])[0] == 0
    code, out, _ = run(["reconstruct", path, "--check-iso", "--report", str(tmp_path / "r.txt")])
    assert code == 0
    assert "all_ok: true" in out
    assert (tmp_path / "r.txt").read_text() == out
    flags = [line for line in out.splitlines() if line.split(": ")[1] in ("true", "false")]
    assert all(line.endswith("true") for line in flags)


def test_search_counts(tmp_path):
    w3 = tmp_path / "w3.inc"
    w3.write_text(run(["gen", "wq", "--q", "3"])[1])
    assert run(["search", "gq-ovoids", str(w3), "--count"])[:2] == (0, "0\n")
    w2 = tmp_path / "w2.inc"
    w2.write_text(run(["gen", "wq", "--q", "2"])[1])
    one = run(["search", "gq-ovoids", str(w2), "--all", "--jobs", "1"])
    many = run(["search", "gq-ovoids", str(w2), "--all", "--jobs", "4"])
    assert one == many and len(one[1].splitlines()) == 6
    first = run(["search", "gq-ovoids", str(w2), "--first", "--jobs", "2"])
    assert first[1].splitlines()[0] == one[1].splitlines()[0]


def test_odd_reconstruct_exit(tmp_path):
    p = tmp_path / "i3.inc"
    p.write_text(run(["gen", "inversive", "--q", "3"])[1])
    code, out, _ = run(["reconstruct", str(p)])
    assert code == 1
    assert "even_order: false" in out and "note: odd order" in out


def test_budget_exceeded(tmp_path):
    p = tmp_path / "w3.inc"
    p.write_text(run(["gen", "wq", "--q", "3"])[1])
    code, _, err = run(["search", "gq-ovoids", str(p), "--budget", "5"])
    assert code == 1 and "exceeded" in err


@pytest.mark.parametrize(
    "text",
    [
        "incidence v1\npoints 5\nblocks 1\n0 0 1\n",
        "incidence v1\npoints 5\nblocks 1\n0 1 5\n",
        "incidence v1\npoints 5\nblocks 2\n0 1\n0 1\n",
        "garbage\n",
    ],
)
def test_parse_errors_exit_2(tmp_path, text):
    p = tmp_path / "bad.inc"
    p.write_text(text)
    code, out, err = run(["stats", str(p)])
    assert code == 2 and out == "" and err.startswith("error:")


def test_usage_errors():
    assert run(["bogus"])[0] == 2
    assert run(["gen", "wq"])[0] == 2
    assert run(["gen", "wq", "--q", "6"])[0] == 2
    assert run(["gen", "ovoid-suzuki", "--q", "4"])[0] == 2
    assert run(["stats", "/nonexistent/file.inc"])[0] == 2


def test_check_failure_has_witness(tmp_path):
    p = tmp_path / "u.inc"
    p.write_text("incidence v1\npoints 3\nblocks 1\n0 1\n")
    code, out, _ = run(["verify", "design", "--t", "2", str(p)])
    assert code == 1
    assert "error: NotBalanced" in out and "witness: 0 2" in out


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "fingeo", "gen", "wq", "--q", "2"], capture_output=True, text=True, check=True
    )
    assert out.stdout.startswith("incidence v1\npoints 15\nblocks 15\n")
