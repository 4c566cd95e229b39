import json
import math

import numpy as np
import pytest

from laddertangle import model
from laddertangle.errors import ConfigError, ParameterError
from laddertangle.experiments import baseline_params


class TestDecayConfig:
    def test_collision_rates_derived(self):
        d = model.DecayConfig(gamma1=3.0, gamma2=0.5, p=6.0)
        assert d.gamma12p == 6.0
        assert d.gamma23p == 6.0
        assert d.gamma13p == 12.0

    def test_negative_rate_rejected(self):
        with pytest.raises(ParameterError):
            model.DecayConfig(gamma1=-1.0, gamma2=0.5, p=0.0)


class TestCoherenceRates:
    @pytest.mark.parametrize("p", [0.0, 0.5, 6.0, 20.0])
    def test_composition(self, p):
        d = model.DecayConfig(gamma1=3.0, gamma2=0.5, p=p)
        c = model.derive_coherence_rates(d)
        assert c.gamma12 == pytest.approx(3.0 + p)
        assert c.gamma13 == pytest.approx(0.5 + 2.0 * p)
        assert c.gamma23 == pytest.approx(3.5 + p)

    def test_positive_with_radiative_decay(self):
        d = model.DecayConfig(gamma1=3.0, gamma2=0.5, p=0.0)
        c = model.derive_coherence_rates(d)
        assert c.gamma12 > 0 and c.gamma13 > 0 and c.gamma23 > 0


class TestCouplings:
    def test_direct_values_take_precedence(self):
        f = model.FieldConfig(alpha1=1.0, alpha2=1.0, g1=0.25, g2=0.125)
        g1, g2 = model.derive_couplings(f, model.GeometryConfig(r=4.5e-4, L=0.06, n=8.5e15))
        assert (g1, g2) == (0.25, 0.125)

    def test_zero_volume_rejected(self):
        with pytest.raises(ParameterError):
            model.GeometryConfig(r=0.0, L=0.0, n=8.5e15)

    def test_baseline_regime_condition(self):
        # pump Rabi coupling must exceed sqrt(gamma12 * gamma13) at baseline
        params = baseline_params(p=0.0)
        o2 = params.rabi2
        bound = math.sqrt(params.coherence.gamma12 * params.coherence.gamma13)
        assert o2 > bound
        assert o2 == pytest.approx(1.75, rel=0.02)

    def test_validate_regime_flags_weak_pump(self):
        params = baseline_params(p=0.0, alpha2=0.01)
        warnings = model.validate_regime(params)
        assert warnings  # no-depletion assumption no longer safe


class TestConfigSchema:
    def test_round_trip(self, tmp_path):
        params = baseline_params(p=0.5, alpha2=37.0, delta2=-200.0)
        path = tmp_path / "cfg.json"
        model.save_config(params, path)
        loaded = model.load_config(path)
        assert model.params_to_config(loaded) == model.params_to_config(params)

    def test_rejects_unknown_keys(self):
        cfg = model.params_to_config(baseline_params())
        cfg["unexpected"] = 1
        with pytest.raises(ConfigError):
            model.params_from_config(cfg)

    def test_rejects_wrong_schema_version(self):
        cfg = model.params_to_config(baseline_params())
        cfg["schema_version"] = 99
        with pytest.raises(ConfigError):
            model.params_from_config(cfg)

    def test_rejects_nonnumeric_rate(self):
        cfg = model.params_to_config(baseline_params())
        cfg["decay"]["gamma1"] = "fast"
        with pytest.raises(ConfigError):
            model.params_from_config(cfg)

    def test_json_serializable(self):
        cfg = model.params_to_config(baseline_params(p=6.0))
        json.dumps(cfg)  # must not raise

    def test_with_overrides(self):
        params = baseline_params(p=0.0)
        out = model.with_overrides(params, field={"alpha2": 300.0})
        assert out.field.alpha2 == 300.0
        assert out.field.alpha1 == params.field.alpha1

    def test_coherence_follows_decay_override(self):
        params = baseline_params(p=0.0)
        out = model.with_overrides(params, decay={"p": 20.0})
        assert out.coherence.gamma12 == pytest.approx(23.0)
        assert out.coherence.gamma13 == pytest.approx(40.5)


class TestSystemParams:
    def test_rabi_scales_linearly_with_amplitude(self):
        a = baseline_params(alpha1=10.0)
        b = baseline_params(alpha1=20.0)
        assert b.rabi1 == pytest.approx(2.0 * a.rabi1)

    def test_doppler_rule_validated(self):
        with pytest.raises(ParameterError):
            model.DopplerConfig(width=530.0, nodes=128, rule="simpson")
