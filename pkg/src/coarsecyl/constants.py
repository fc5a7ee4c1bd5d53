"""The constant ledger shared by every downstream computation."""
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

PAPER = "paper-faithful"
EXPLORATORY = "exploratory"
REGIMES = (PAPER, EXPLORATORY)

_FIELDS = ("delta", "lambda_", "epsilon", "mu", "theta", "rho", "stability_D",
           "n_triangle", "phi_n", "capa_mu", "l")


class ConstantError(ValueError):
    pass


def mu_from(epsilon, lam):
    return (100 * epsilon + lam * lam) * 40 * lam


def theta_from(stability_D, epsilon, delta, rho):
    return max(10000 * (stability_D + epsilon + delta), rho)


def phi_from(n_triangle, capa_mu, epsilon):
    return 24 * (n_triangle + 1) * capa_mu * (2 * epsilon + 1) * epsilon


@dataclass(frozen=True)
class ConstantSet:
    delta: int
    lambda_: int
    epsilon: int
    mu: int
    theta: int
    rho: int
    stability_D: int
    n_triangle: int
    phi_n: int
    capa_mu: int
    l: int
    regime: str = EXPLORATORY
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ConstantError(f"unknown regime {self.regime!r}")
        for name in _FIELDS:
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConstantError(f"{name} must be a natural number, got {v!r}")
        if self.regime == PAPER:
            problems = self.paper_violations()
            if problems:
                raise ConstantError("; ".join(problems))
        else:
            for name in ("delta", "lambda_", "epsilon", "mu"):
                if getattr(self, name) <= 0:
                    raise ConstantError(f"{name} must be positive")

    def paper_violations(self):
        out = []
        if self.delta < 2:
            out.append("delta < 2")
        if self.lambda_ != 1000 * self.delta:
            out.append("lambda != 1000 delta")
        if self.mu != mu_from(self.epsilon, self.lambda_):
            out.append("mu != (100 eps + lambda^2) 40 lambda")
        if self.theta != theta_from(self.stability_D, self.epsilon, self.delta, self.rho):
            out.append("theta != max(10000 (D + eps + delta), rho)")
        if self.phi_n != phi_from(self.n_triangle, self.capa_mu, self.epsilon):
            out.append("phi(n) != 24 (n+1) Capa(mu) (2 eps + 1) eps")
        return out

    # derived quantities
    @property
    def Lambda(self):
        """Quasi-geodesic constant of the local windows (lambda / 2)."""
        return Fraction(self.lambda_, 2)

    @property
    def local_window(self):
        """Window length of the local quasi-geodesic clause."""
        return 40 * self.lambda_ * (self.epsilon + 100 * self.lambda_ * self.delta)

    def candidate_ls(self):
        """The candidates l_i = 10 mu + 2 i eps, i = 1 .. phi(n) / (2 eps)."""
        k = self.phi_n // (2 * self.epsilon)
        return [10 * self.mu + 2 * i * self.epsilon for i in range(1, k + 1)]

    def with_l(self, l, note=None):
        prov = dict(self.provenance)
        prov["l"] = note or f"set to {l}"
        return replace(self, l=l, provenance=prov)

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["lambda_"] = d.pop("lambda")
        return cls(**d)


def paper_faithful(delta_raw, epsilon, stability_D=0, rho=0, capa_mu=1,
                   n_triangle=1, l=None, provenance=None):
    """Build a ConstantSet obeying all the relational constraints.

    ``delta_raw`` is clamped to at least 2.  ``l`` defaults to the first
    candidate ``10 mu + 2 eps`` (which exceeds ``mu``).
    """
    prov = {"delta": f"raw {delta_raw}, clamped to max(raw, 2)",
            "lambda": "1000 delta",
            "mu": "(100 eps + lambda^2) 40 lambda",
            "theta": "max(10000 (D + eps + delta), rho)",
            "phi_n": "24 (n+1) Capa(mu) (2 eps + 1) eps"}
    prov.update(provenance or {})
    delta = max(int(delta_raw), 2)
    lam = 1000 * delta
    mu = mu_from(epsilon, lam)
    if l is None:
        l = 10 * mu + 2 * epsilon
        prov.setdefault("l", "first candidate 10 mu + 2 eps")
    return ConstantSet(delta=delta, lambda_=lam, epsilon=int(epsilon), mu=mu,
                       theta=theta_from(stability_D, epsilon, delta, rho),
                       rho=int(rho), stability_D=int(stability_D),
                       n_triangle=int(n_triangle),
                       phi_n=phi_from(n_triangle, capa_mu, epsilon),
                       capa_mu=int(capa_mu), l=int(l), regime=PAPER,
                       provenance=prov)


def exploratory(delta=1, lambda_=4, epsilon=1, mu=3, theta=None, rho=0,
                stability_D=0, n_triangle=1, phi_n=None, capa_mu=1, l=2,
                provenance=None):
    """Free-form small constants; only positivity is enforced."""
    if theta is None:
        theta = max(stability_D + epsilon + delta, rho)
    if phi_n is None:
        phi_n = 2 * epsilon
    prov = {"regime": "exploratory values chosen by caller"}
    prov.update(provenance or {})
    return ConstantSet(delta=delta, lambda_=lambda_, epsilon=epsilon, mu=mu,
                       theta=theta, rho=rho, stability_D=stability_D,
                       n_triangle=n_triangle, phi_n=phi_n, capa_mu=capa_mu,
                       l=l, regime=EXPLORATORY, provenance=prov)
