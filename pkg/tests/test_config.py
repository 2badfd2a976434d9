import pytest

from twobridge.config import DEFAULT_TOLERANCES, RunConfig, Tolerances, parse_config_text


def test_defaults():
    cfg = RunConfig()
    assert cfg.max_den == 200 and cfg.format == "auto" and cfg.omega is None
    assert cfg.tolerances.relator_residual == 1e-10
    assert cfg.as_dict()["prune_eps"] == DEFAULT_TOLERANCES.prune_eps


def test_overrides_from_text():
    text = """
    # sums
    max_den = 400
    prune-eps = 1e-9
    omega = 0.5+0.8j
    mirror_reduce = yes
    """
    cfg = RunConfig().with_values(parse_config_text(text))
    assert cfg.max_den == 400 and cfg.tolerances.prune_eps == 1e-9
    assert cfg.omega == complex(0.5, 0.8) and cfg.mirror_reduce


@pytest.mark.parametrize("values", [{"max_den": "0"}, {"depth": "-1"}, {"format": "xml"},
                                    {"prune_eps": "0"}, {"colour": "red"}])
def test_rejects_bad_values(values):
    with pytest.raises(ValueError):
        RunConfig().with_values(values)


def test_parse_rejects_lines_without_equals():
    with pytest.raises(ValueError, match="line 2"):
        parse_config_text("max_den=3\nnonsense\n")


def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        RunConfig(tolerances=Tolerances(markov=-1.0))
