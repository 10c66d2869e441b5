import json
from dataclasses import dataclass, asdict, fields
from .errors import NonPositiveParameter, NegativeGravity


@dataclass(frozen=True)
class FluidParams:
    """
    Physical configuration of the two-phase problem.

    Phase 1 occupies y < 0, phase 2 occupies y > 0 (the upper phase).

    ## Fields
    * `rho1, rho2` densities
    * `mu1, mu2` dynamic viscosities
    * `sigma` surface tension
    * `gamma_a` gravitational acceleration (0 allowed)
    """
    rho1: float = 1.0
    rho2: float = 1.0
    mu1: float = 1.0
    mu2: float = 1.0
    sigma: float = 1.0
    gamma_a: float = 0.0

    @property
    def density_jump(self):
        return jump(self.rho2, self.rho1)

    @property
    def viscosity_jump(self):
        return jump(self.mu2, self.mu1)

    def swapped(self):
        """
        The reflected configuration y -> -y: phases exchange roles.
        """
        return FluidParams(rho1=self.rho2, rho2=self.rho1, mu1=self.mu2, mu2=self.mu1,
                           sigma=self.sigma, gamma_a=self.gamma_a)

    def replace(self, **changes):
        d = asdict(self)
        d.update(changes)
        return FluidParams(**d)

    def to_dict(self):
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    def to_json(self):
        return json.dumps(self.to_dict())

    @staticmethod
    def from_dict(d):
        names = [f.name for f in fields(FluidParams)]
        unknown = set(d) - set(names)
        if unknown:
            raise KeyError(f"FluidParams: unrecognized keys {sorted(unknown)}")
        return FluidParams(**{k: float(d[k]) for k in names if k in d})

    @staticmethod
    def from_json(s):
        return FluidParams.from_dict(json.loads(s))


PRESETS = {
    "rt": FluidParams(rho1=1.0, rho2=2.0, mu1=1.0, mu2=1.0, sigma=1.0, gamma_a=1.0),
    "stable": FluidParams(rho1=2.0, rho2=1.0, mu1=1.0, mu2=1.0, sigma=1.0, gamma_a=1.0),
    "unit": FluidParams(rho1=1.0, rho2=1.0, mu1=1.0, mu2=1.0, sigma=1.0, gamma_a=1.0),
}


def jump(value_omega2, value_omega1):
    """
    [[v]] = v on the upper phase minus v on the lower phase.
    """
    return value_omega2 - value_omega1


def validate_params(p):
    for name in ("rho1", "rho2", "mu1", "mu2", "sigma"):
        value = getattr(p, name)
        if not value > 0:
            raise NonPositiveParameter(name, value)
    if not p.gamma_a >= 0:
        raise NegativeGravity(p.gamma_a)
    return p
