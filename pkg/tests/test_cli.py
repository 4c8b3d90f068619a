import pytest

from slidefr.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, build_parser, main
from slidefr.io import read_manifest
from slidefr.mesh import read_subdomain

QUICK = [
    "--set", "case.exact=free_stream",
    "--set", "mesh.generator=block",
    "--set", "solver.order=2",
    "--set", "time.scheme=ssp(3,3)",
    "--set", "time.dt=0.01",
    "--set", "time.end_time=0.02",
]
BOX = [arg for tag in ("bottom", "right", "top", "left") for arg in ("--set", f"boundary.{tag}=dirichlet")]


def test_run_succeeds(tmp_path):
    assert main(["run", *QUICK, *BOX, "--output", str(tmp_path)]) == EXIT_OK
    manifest = read_manifest(tmp_path / "manifest.json")
    assert manifest["status"] == "completed"
    assert manifest["config"]["output"]["directory"] == str(tmp_path)


def test_run_resumes_from_restart(tmp_path):
    assert main(["run", *QUICK, *BOX, "--output", str(tmp_path / "a")]) == EXIT_OK
    restart = tmp_path / "a" / "restart_00000002.bin"
    args = ["run", *QUICK, *BOX, "--set", "time.end_time=0.03", "--output", str(tmp_path / "b")]
    assert main([*args, "--restart", str(restart)]) == EXIT_OK
    assert read_manifest(tmp_path / "b" / "manifest.json")["steps"] == 3


@pytest.mark.parametrize(
    "extra",
    [
        ["--set", "solver.order=0"],
        ["--set", "nonsense"],
        ["--preset", "no-such-case"],
        ["--set", "boundary.top=slip"],
    ],
)
def test_configuration_errors_exit_2(tmp_path, extra):
    assert main(["run", *QUICK, *BOX, *extra, "--output", str(tmp_path)]) == EXIT_CONFIG


def test_missing_boundary_exits_2(tmp_path):
    assert main(["run", *QUICK, "--output", str(tmp_path)]) == EXIT_CONFIG
    assert not (tmp_path / "manifest.json").exists()


def test_bad_restart_exits_1(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"nope")
    assert main(["run", *QUICK, *BOX, "--output", str(tmp_path / "out"), "--restart", str(bad)]) == EXIT_FAILURE


def test_run_from_file(tmp_path):
    config = tmp_path / "run.ini"
    config.write_text(
        "[case]\nexact = free_stream\n[mesh]\ngenerator = block\n[solver]\norder = 1\n"
        "[time]\nscheme = ssp(4,2)\ndt = 0.01\nend_time = 0.01\n"
        "[boundary]\nbottom = dirichlet\nright = dirichlet\ntop = dirichlet\nleft = dirichlet\n"
    )
    assert main(["run", str(config), "--output", str(tmp_path / "out")]) == EXIT_OK


def test_generate_mesh(tmp_path):
    assert main(["generate-mesh", "vortex", "--scale", "0.1", "--output", str(tmp_path)]) == EXIT_OK
    inner = read_subdomain(tmp_path / "vortex-0.mesh")
    outer = read_subdomain(tmp_path / "vortex-1.mesh")
    assert (inner.n_cells, outer.n_cells) == (20, 52)


def test_generate_mesh_errors(tmp_path):
    assert main(["generate-mesh", "teapot", "--output", str(tmp_path)]) == EXIT_CONFIG
    assert main(["generate-mesh", "block", "--scale", "2", "--output", str(tmp_path)]) == EXIT_CONFIG


def test_verify_mapping_suite(capsys):
    assert main(["verify", "--suite", "mapping"]) == EXIT_OK
    assert capsys.readouterr().out.count("PASS") == 3


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "nope"]) == EXIT_CONFIG


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["study", "spectra"])
