from typing import Dict


class Limits:
    """Resource caps shared by every computation in a process

    ctor params:
    cap_order: int -- largest group the closure will materialize
    budget_prefixes: int -- generator-image prefixes a single hom search may explore
    h2_cap: int -- largest group whose full H^2 basis is built
    assoc_full_limit: int -- orders up to this get an exhaustive associativity check
    assoc_sample_factor: int -- above it, sample this many times order^2 triples
    membership_tuples: int -- exhaustive tuple count for the matrix membership criterion
    membership_samples: int -- tuples sampled when the exhaustive count is over budget
    standin_components: int -- representations a lower-central stand-in may carry
    seed: int -- seed for every sampled check and random catalog choice
    """

    CAP_ORDER = 8192
    BUDGET_PREFIXES = 2**31
    H2_CAP = 128
    ASSOC_FULL_LIMIT = 512
    ASSOC_SAMPLE_FACTOR = 10
    MEMBERSHIP_TUPLES = 2**16
    MEMBERSHIP_SAMPLES = 4096
    STANDIN_COMPONENTS = 2**14

    def __init__(self, cap_order: int = CAP_ORDER, budget_prefixes: int = BUDGET_PREFIXES,
                 h2_cap: int = H2_CAP, assoc_full_limit: int = ASSOC_FULL_LIMIT,
                 assoc_sample_factor: int = ASSOC_SAMPLE_FACTOR,
                 membership_tuples: int = MEMBERSHIP_TUPLES,
                 membership_samples: int = MEMBERSHIP_SAMPLES,
                 standin_components: int = STANDIN_COMPONENTS, seed: int = 0) -> None:
        self.cap_order = cap_order
        self.budget_prefixes = budget_prefixes
        self.h2_cap = h2_cap
        self.assoc_full_limit = assoc_full_limit
        self.assoc_sample_factor = assoc_sample_factor
        self.membership_tuples = membership_tuples
        self.membership_samples = membership_samples
        self.standin_components = standin_components
        self.seed = seed

    @staticmethod
    def _positive(value: int, what: str) -> int:
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ValueError(f"Invalid {what}: {value!r}")
        return value

    @property
    def cap_order(self) -> int:
        return self._cap_order

    @cap_order.setter
    def cap_order(self, value: int) -> None:
        self._cap_order = self._positive(value, "cap_order")

    @property
    def budget_prefixes(self) -> int:
        return self._budget_prefixes

    @budget_prefixes.setter
    def budget_prefixes(self, value: int) -> None:
        self._budget_prefixes = self._positive(value, "budget_prefixes")

    @property
    def h2_cap(self) -> int:
        return self._h2_cap

    @h2_cap.setter
    def h2_cap(self, value: int) -> None:
        self._h2_cap = self._positive(value, "h2_cap")

    @property
    def assoc_full_limit(self) -> int:
        return self._assoc_full_limit

    @assoc_full_limit.setter
    def assoc_full_limit(self, value: int) -> None:
        self._assoc_full_limit = self._positive(value, "assoc_full_limit")

    @property
    def assoc_sample_factor(self) -> int:
        return self._assoc_sample_factor

    @assoc_sample_factor.setter
    def assoc_sample_factor(self, value: int) -> None:
        self._assoc_sample_factor = self._positive(value, "assoc_sample_factor")

    @property
    def membership_tuples(self) -> int:
        return self._membership_tuples

    @membership_tuples.setter
    def membership_tuples(self, value: int) -> None:
        self._membership_tuples = self._positive(value, "membership_tuples")

    @property
    def membership_samples(self) -> int:
        return self._membership_samples

    @membership_samples.setter
    def membership_samples(self, value: int) -> None:
        self._membership_samples = self._positive(value, "membership_samples")

    @property
    def standin_components(self) -> int:
        return self._standin_components

    @standin_components.setter
    def standin_components(self, value: int) -> None:
        self._standin_components = self._positive(value, "standin_components")

    @property
    def seed(self) -> int:
        return self._seed

    @seed.setter
    def seed(self, value: int) -> None:
        if not isinstance(value, int) or value < 0:
            raise ValueError(f"Invalid seed: {value!r}")
        self._seed = value

    def duplicate(self) -> "Limits":
        return Limits.from_json_dict(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, jd: Dict) -> "Limits":
        """A manifest "budgets" block. Missing keys keep their defaults.

        Like this:
            {
                "cap_order": 4096,
                "budget_prefixes": 1000000
            }
        """
        unknown = set(jd) - set(cls().to_json_dict())
        if unknown:
            raise ValueError(f"Unknown budget keys: {sorted(unknown)}")
        return cls(**jd)

    def to_json_dict(self) -> Dict:
        return {
            "cap_order": self.cap_order,
            "budget_prefixes": self.budget_prefixes,
            "h2_cap": self.h2_cap,
            "assoc_full_limit": self.assoc_full_limit,
            "assoc_sample_factor": self.assoc_sample_factor,
            "membership_tuples": self.membership_tuples,
            "membership_samples": self.membership_samples,
            "standin_components": self.standin_components,
            "seed": self.seed
        }


_current = Limits()


def current() -> Limits:
    return _current


def configure(limits: Limits) -> Limits:
    """Install limits for this process and return the previous ones"""
    global _current
    previous = _current
    _current = limits
    return previous
