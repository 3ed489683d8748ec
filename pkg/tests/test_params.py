import math

import numpy as np
import pytest

from fieldrand.params import (
    ConfigError,
    Dirichlet,
    FreeSpace,
    Periodic,
    PhysicalConfig,
    config_from_items,
    parse_config_file,
    profile_ft,
    scenario_name,
    validate,
)


def make_config(**overrides):
    base = dict(coupling=0.01, atom_size=0.001, gap=1.0, duration=1.0)
    base.update(overrides)
    return PhysicalConfig(**base)


class TestValidation:
    def test_reference_point_is_valid(self):
        cfg = make_config(amplitude=1.0)
        assert validate(cfg) is cfg
        assert cfg.cutoff == 6.0
        assert isinstance(cfg.scenario, FreeSpace)

    def test_negative_coupling_rejected(self):
        with pytest.raises(ConfigError, match="coupling must be positive"):
            make_config(coupling=-0.1)

    def test_zero_coupling_rejected(self):
        with pytest.raises(ConfigError):
            make_config(coupling=0.0)

    @pytest.mark.parametrize(
        "field,value",
        [
            ("atom_size", 0.0),
            ("gap", -1.0),
            ("duration", -0.5),
            ("amplitude", 1.2),
            ("amplitude", -0.1),
            ("cutoff", 0.0),
        ],
    )
    def test_scalar_constraints(self, field, value):
        with pytest.raises(ConfigError):
            make_config(**{field: value})

    def test_zero_duration_allowed(self):
        assert make_config(duration=0.0).duration == 0.0

    def test_dirichlet_caption_point_valid(self):
        scen = Dirichlet(3.0, math.pi * 3.0 / 6.0)
        cfg = make_config(scenario=scen)
        assert cfg.scenario.position == pytest.approx(1.5708, abs=1e-4)

    def test_atom_too_large_for_cavity(self):
        with pytest.raises(ConfigError, match="length/100"):
            make_config(atom_size=0.05, scenario=Periodic(3.0))

    @pytest.mark.parametrize("position", [0.0, 10.0, -1.0, 11.0])
    def test_dirichlet_position_must_be_interior(self, position):
        with pytest.raises(ConfigError):
            make_config(scenario=Dirichlet(10.0, position))

    def test_cavity_length_positive(self):
        with pytest.raises(ConfigError):
            make_config(scenario=Periodic(-3.0))


class TestProfile:
    def test_unit_at_zero(self):
        assert profile_ft(0.0, 0.5) == 1.0

    def test_cutoff_tail_negligible(self):
        # value at k = N_c/sigma with N_c = 6, independent of sigma
        for sigma in (1e-3, 0.1, 2.0):
            assert profile_ft(6.0 / sigma, sigma) == pytest.approx(math.exp(-36.0))
            assert profile_ft(6.0 / sigma, sigma) < 1e-15

    def test_even_in_k(self):
        k = np.array([0.3, 1.7, 42.0])
        assert np.array_equal(profile_ft(k, 0.2), profile_ft(-k, 0.2))

    def test_vectorized_shape(self):
        out = profile_ft(np.linspace(0, 5, 7), 0.1)
        assert out.shape == (7,)


class TestScenarioNames:
    def test_tags(self):
        assert scenario_name(FreeSpace()) == "free_space"
        assert scenario_name(Periodic(2.0)) == "periodic"
        assert scenario_name(Dirichlet(2.0, 1.0)) == "dirichlet"


class TestConfigFile:
    def write(self, tmp_path, text):
        path = tmp_path / "run.cfg"
        path.write_text(text)
        return str(path)

    def test_round_trip(self, tmp_path):
        path = self.write(
            tmp_path,
            """
            # reference configuration
            coupling = 0.01
            atom_size = 0.001
            gap = 1.0
            duration = 1.0
            amplitude = 0.5   # prepared superposition
            scenario = dirichlet
            length = 10
            position = 5
            """,
        )
        cfg = parse_config_file(path)
        assert cfg.coupling == 0.01
        assert cfg.amplitude == 0.5
        assert cfg.scenario == Dirichlet(10.0, 5.0)

    def test_defaults_applied(self, tmp_path):
        path = self.write(
            tmp_path, "coupling = 0.01\natom_size = 0.001\ngap = 1\nduration = 2\n"
        )
        cfg = parse_config_file(path)
        assert cfg.amplitude == 1.0
        assert cfg.cutoff == 6.0
        assert isinstance(cfg.scenario, FreeSpace)

    def test_periodic_position_defaults_to_zero(self, tmp_path):
        path = self.write(
            tmp_path,
            "coupling=0.01\natom_size=0.001\ngap=1\nduration=1\n"
            "scenario=periodic\nlength=3\n",
        )
        assert parse_config_file(path).scenario == Periodic(3.0, 0.0)

    def test_missing_required_key(self, tmp_path):
        path = self.write(tmp_path, "coupling = 0.01\natom_size = 0.001\ngap = 1\n")
        with pytest.raises(ConfigError, match="duration"):
            parse_config_file(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = self.write(
            tmp_path,
            "coupling=0.01\natom_size=0.001\ngap=1\nduration=1\nbogus=3\n",
        )
        with pytest.raises(ConfigError, match="bogus"):
            parse_config_file(path)

    def test_non_numeric_value(self, tmp_path):
        path = self.write(
            tmp_path, "coupling=soup\natom_size=0.001\ngap=1\nduration=1\n"
        )
        with pytest.raises(ConfigError, match="not a number"):
            parse_config_file(path)

    def test_free_space_rejects_length(self, tmp_path):
        path = self.write(
            tmp_path,
            "coupling=0.01\natom_size=0.001\ngap=1\nduration=1\nlength=3\n",
        )
        with pytest.raises(ConfigError, match="cavity"):
            parse_config_file(path)

    def test_dirichlet_requires_position(self, tmp_path):
        path = self.write(
            tmp_path,
            "coupling=0.01\natom_size=0.001\ngap=1\nduration=1\n"
            "scenario=dirichlet\nlength=3\n",
        )
        with pytest.raises(ConfigError, match="position"):
            parse_config_file(path)

    def test_malformed_line(self, tmp_path):
        path = self.write(tmp_path, "coupling 0.01\n")
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_file(path)

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config_file("/nonexistent/run.cfg")

    def test_items_are_consumed(self):
        items = {
            "coupling": "0.01",
            "atom_size": "0.001",
            "gap": "1",
            "duration": "1",
        }
        config_from_items(items)
        assert items == {}
