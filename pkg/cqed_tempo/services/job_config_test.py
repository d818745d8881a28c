from pathlib import Path

import pytest

from cqed_tempo.packages.spectra import DriveMode

from .job_config import (
    ConfigError,
    JobKind,
    default_timestep,
    dynamics_steps,
    parse_config,
    timestep,
)

MINIMAL = """
[system]
g_mev = 15
kappa_mev = 15

[bath]
mode_file = "modes.txt"
"""


def write_config(directory: Path, text: str, modes: str = "0.1 0.2\n") -> Path:
    (directory / "modes.txt").write_text(modes)
    path = directory / "job.toml"
    path.write_text(text)
    return path


class TestParseConfig:
    def test_minimal_defaults(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, MINIMAL))

        assert cfg.system.omega_e_ev == 2.0
        assert cfg.system.omega_c_ev is None
        assert cfg.bath.temperature_k == 4.0
        assert cfg.bath.alphas == [1.0]
        assert cfg.engine.svd_cutoff == 1e-6
        assert cfg.engine.pad_to == 2**15
        assert cfg.job.drive is DriveMode.CAVITY
        assert timestep(cfg) == 5.0

    def test_mode_file_resolves_against_config_dir(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, MINIMAL))
        assert cfg.bath.mode_file == tmp_path / "modes.txt"

    def test_missing_mode_file(self, tmp_path):
        path = tmp_path / "job.toml"
        path.write_text(MINIMAL)
        with pytest.raises(ConfigError) as exc_info:
            parse_config(path)
        assert any("bath.mode_file" in e for e in exc_info.value.errors)

    def test_unknown_key_rejected(self, tmp_path):
        text = MINIMAL.replace("kappa_mev = 15", "kappa_mev = 15\nkapa_mev = 15")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(write_config(tmp_path, text))
        assert exc_info.value.errors == ["system.kapa_mev: Extra inputs are not permitted"]

    def test_missing_keys_listed_together(self, tmp_path):
        text = "[system]\nomega_e_ev = 2.0\n\n[bath]\nmode_file = 'modes.txt'\n"
        with pytest.raises(ConfigError) as exc_info:
            parse_config(write_config(tmp_path, text))
        locations = {e.split(":")[0] for e in exc_info.value.errors}
        assert locations == {"system.g_mev", "system.kappa_mev"}

    def test_bath_source_is_exclusive(self, tmp_path):
        text = MINIMAL + (
            "\n[bath.analytic]\nshape = 'gaussian'\n"
            "center_mev = 50\nwidth_mev = 10\ns_tot = 0.3\n"
        )
        with pytest.raises(ConfigError, match="invalid entries"):
            parse_config(write_config(tmp_path, text))

    def test_empty_alpha_sweep(self, tmp_path):
        text = MINIMAL + "alpha_hrf = []\n"
        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, text))

    @pytest.mark.parametrize("alpha", ["-0.1", "1.5", "[0.0, 2.0]"])
    def test_alpha_out_of_range(self, tmp_path, alpha):
        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, MINIMAL + f"alpha_hrf = {alpha}\n"))

    def test_pad_must_be_power_of_two(self, tmp_path):
        text = MINIMAL + "\n[engine]\npad_to = 1000\n"
        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, text))

    def test_timestep_given_in_fs(self, tmp_path):
        text = MINIMAL + "\n[engine]\ndt_fs = 0.6582119569\n"
        cfg = parse_config(write_config(tmp_path, text))
        assert timestep(cfg) == pytest.approx(1.0)

    def test_both_timesteps_rejected(self, tmp_path):
        text = MINIMAL + "\n[engine]\ndt_fs = 1.0\ndt_ev_inv = 1.0\n"
        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, text))

    def test_malformed_toml(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(write_config(tmp_path, "[system\n"))

    def test_file_not_found(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(tmp_path / "missing.toml")


class TestJobKind:
    def test_with_kind_sets_command(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, MINIMAL))
        assert cfg.with_kind(JobKind.SPECTRUM).job.kind is JobKind.SPECTRUM

    def test_conflicting_kind(self, tmp_path):
        text = MINIMAL + "\n[job]\nkind = 'dynamics'\n"
        cfg = parse_config(write_config(tmp_path, text))
        with pytest.raises(ConfigError):
            cfg.with_kind(JobKind.SWEEP)

    def test_coupling_points_default_to_system(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, MINIMAL))
        [point] = cfg.coupling_points()
        assert (point.g_mev, point.kappa_mev) == (15, 15)


class TestTimestep:
    @pytest.mark.parametrize(
        "g, expected",
        [(0.010, 5.0), (0.015, 5.0), (0.050, 3.0), (0.100, 2.0)],
    )
    def test_default_by_coupling(self, g, expected):
        assert default_timestep(g) == expected

    def test_dynamics_steps_cover_five_lifetimes(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, MINIMAL))
        n = dynamics_steps(cfg, 5.0)
        assert 250 <= n <= 251

    def test_dynamics_steps_need_a_rate(self, tmp_path):
        text = MINIMAL.replace("kappa_mev = 15", "kappa_mev = 0\ngamma_mev = 0")
        cfg = parse_config(write_config(tmp_path, text))
        with pytest.raises(ConfigError):
            dynamics_steps(cfg, 5.0)
