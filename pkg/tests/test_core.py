import cmath
import math
import pytest
from freeboundary.core import (FluidParams, PRESETS, jump, validate_params, in_sector, Sector, StripDomain,
    NonPositiveParameter, NegativeGravity)


def test_jump():
    assert jump(5.0, 2.0) == 3.0
    assert jump(1.5 + 2j, 1.5 + 2j) == 0
    assert jump(3 - 1j, 2j) == -jump(2j, 3 - 1j)


def test_density_jump_follows_upper_minus_lower(rt):
    assert rt.density_jump == 1.0
    assert rt.swapped().density_jump == -1.0


@pytest.mark.parametrize("w, theta, expected", [
    (1 + 0j, math.pi/2, True),
    (-1 + 0j, math.pi/2, False),
    (1j, math.pi/2 + 0.1, True),
    (1j, math.pi/2, False),
    (0j, 3.0, False)])
def test_in_sector(w, theta, expected):
    assert in_sector(w, theta) is expected


def test_sector_monotone():
    for angle in (0.1, 1.0, 2.0, 3.0, -2.5):
        w = cmath.exp(1j*angle)
        for (t1, t2) in ((0.5, 1.0), (1.5, 2.9), (2.0, 3.1)):
            if in_sector(w, t1):
                assert in_sector(w, t2)


def test_sector_rays_strictly_inside():
    sector = Sector(math.pi/2 + 0.1)
    rays = sector.rays(9)
    assert len(rays) == 9
    assert all(cmath.exp(1j*a) in sector for a in rays)
    assert rays == pytest.approx(-rays[::-1])


def test_strip_domain():
    strip = StripDomain(beta=1.0, delta=0.5)
    assert 1.9 + 0.4j in strip
    assert 2.0 not in strip
    assert 0.5j not in strip
    assert all(z in strip for z in strip.points(5, 5))


def test_validate_params():
    p = FluidParams(1, 1, 1, 1, 1, 1)
    assert validate_params(p) is p
    assert validate_params(validate_params(p)) == p
    assert validate_params(p.replace(gamma_a=0.0)).gamma_a == 0.0
    with pytest.raises(NonPositiveParameter) as e:
        validate_params(p.replace(sigma=0.0))
    assert e.value.name == "sigma"
    with pytest.raises(NegativeGravity):
        validate_params(p.replace(gamma_a=-1.0))


def test_params_json_round_trip():
    p = PRESETS["rt"]
    assert FluidParams.from_json(p.to_json()) == p
    assert sorted(p.to_dict()) == ["gamma_a", "mu1", "mu2", "rho1", "rho2", "sigma"]
    with pytest.raises(KeyError):
        FluidParams.from_dict({"rho3": 1.0})
