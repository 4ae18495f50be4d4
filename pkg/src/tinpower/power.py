"""Transmit power allocations on the normalized exponent scale.

Each transmitter either backs off from full power by a nonpositive
rational exponent (full power is 0) or is switched off entirely.  Off is
a distinct state, not a very negative exponent: an off transmitter
contributes no interference at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union


class _OffType:
    """Marker for a transmitter that is switched off."""

    _instance = None

    def __new__(cls) -> "_OffType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "off"

    def __copy__(self) -> "_OffType":
        return self

    def __deepcopy__(self, memo: dict) -> "_OffType":
        return self


OFF = _OffType()

PowerLevel = Union[Fraction, _OffType]


@dataclass(frozen=True)
class PowerAllocation:
    """Per-transmitter power exponents; ``OFF`` entries transmit nothing."""

    entries: tuple[PowerLevel, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("power allocation needs at least one user")
        for pos, level in enumerate(self.entries):
            if level is OFF:
                continue
            if not isinstance(level, Fraction):
                raise TypeError(
                    f"entry {pos + 1}: expected a Fraction or OFF, got {type(level).__name__}"
                )
            if level > 0:
                raise ValueError(
                    f"entry {pos + 1}: exponent {level} is positive; full power is 0"
                )

    @classmethod
    def of(cls, *levels: object) -> "PowerAllocation":
        """Build an allocation, coercing ints/strings to exact rationals."""
        coerced: list[PowerLevel] = []
        for level in levels:
            if level is OFF:
                coerced.append(OFF)
            else:
                coerced.append(Fraction(level))  # type: ignore[arg-type]
        return cls(tuple(coerced))

    @property
    def k(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[PowerLevel]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> PowerLevel:
        return self.entries[i]

    def is_on(self, i: int) -> bool:
        return self.entries[i] is not OFF

    def on_users(self) -> tuple[int, ...]:
        return tuple(i for i, level in enumerate(self.entries) if level is not OFF)


def parse_allocation(text: str) -> PowerAllocation:
    """Parse whitespace-separated power entries.

    Each entry is ``off`` (case-insensitive) or a rational number that is
    at most 0; ``#`` starts a comment that runs to the end of the line.
    """
    tokens: list[str] = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens:
        raise ValueError("no power entries found")
    entries: list[PowerLevel] = []
    for pos, token in enumerate(tokens, start=1):
        if token.lower() == "off":
            entries.append(OFF)
            continue
        try:
            value = Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"entry {pos}: not a rational number: {token!r}") from None
        if value > 0:
            raise ValueError(f"entry {pos}: exponent {value} is positive; full power is 0")
        entries.append(value)
    return PowerAllocation(tuple(entries))


def format_allocation(allocation: PowerAllocation) -> str:
    return " ".join(
        "off" if level is OFF else str(level) for level in allocation.entries
    )


def binary_allocation(k: int, on_users: Iterable[int]) -> PowerAllocation:
    """Full power for every user in ``on_users`` (0-based), off otherwise."""
    if k < 1:
        raise ValueError(f"need at least one user, got k={k}")
    chosen = set(on_users)
    for i in chosen:
        if not 0 <= i < k:
            raise ValueError(f"user {i} out of range for {k} users")
    return PowerAllocation(
        tuple(Fraction(0) if i in chosen else OFF for i in range(k))
    )


def normalize_power(allocation: PowerAllocation) -> PowerAllocation:
    """Shift every transmitting user so the strongest one sits at full power.

    The shift never lowers any user's GDoF (the noise floor stays put while
    every signal rises), and at a sum-optimal allocation it changes nothing,
    so optima can always be reported in this canonical form.  All-off
    allocations have nothing to anchor the shift to and are rejected.
    """
    on = allocation.on_users()
    if not on:
        raise ValueError("every user is off; nothing to normalize")
    shift = max(allocation.entries[i] for i in on)  # type: ignore[type-var]
    return PowerAllocation(
        tuple(
            level if level is OFF else level - shift
            for level in allocation.entries
        )
    )
