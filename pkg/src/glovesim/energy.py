"""Duty-cycle energy model for the wearable.

The device alternates between an active burst (reader energized) and a
sleep state.  Average draw is the duty-weighted mean of the two currents;
battery life is capacity over that average.  The supply voltage is a
parameter so current figures can be restated as power.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class EnergyProfile:
    sleep_current_ma: float = 400.0
    active_current_ma: float = 1400.0
    duty_active: float = 0.40
    supply_v: float = 5.0

    def __post_init__(self) -> None:
        if self.sleep_current_ma < 0 or self.active_current_ma <= 0:
            raise ValueError("currents must be positive (sleep may be zero)")
        if not 0.0 <= self.duty_active <= 1.0:
            raise ValueError("duty_active must be within [0, 1]")
        if self.supply_v <= 0:
            raise ValueError("supply_v must be positive")


def average_current_ma(profile: EnergyProfile = EnergyProfile()) -> float:
    """Duty-weighted mean draw in milliamps."""
    return (
        profile.duty_active * profile.active_current_ma
        + (1.0 - profile.duty_active) * profile.sleep_current_ma
    )


def battery_life_h(capacity_mah: float, profile: EnergyProfile = EnergyProfile()) -> float:
    """Hours on a battery of ``capacity_mah``."""
    if capacity_mah <= 0:
        raise ValueError("capacity_mah must be positive")
    return capacity_mah / average_current_ma(profile)


def sleep_power_w(profile: EnergyProfile = EnergyProfile()) -> float:
    return profile.sleep_current_ma * profile.supply_v / 1000.0


def active_power_w(profile: EnergyProfile = EnergyProfile()) -> float:
    return profile.active_current_ma * profile.supply_v / 1000.0


def average_power_w(profile: EnergyProfile = EnergyProfile()) -> float:
    return average_current_ma(profile) * profile.supply_v / 1000.0


def energy_summary(capacity_mah: float, profile: EnergyProfile = EnergyProfile()) -> dict[str, Any]:
    """JSON-ready summary used in experiment reports."""
    return {
        "profile": {
            "sleep_current_ma": profile.sleep_current_ma,
            "active_current_ma": profile.active_current_ma,
            "duty_active": profile.duty_active,
            "supply_v": profile.supply_v,
        },
        "capacity_mah": capacity_mah,
        "average_current_ma": average_current_ma(profile),
        "sleep_power_w": sleep_power_w(profile),
        "active_power_w": active_power_w(profile),
        "average_power_w": average_power_w(profile),
        "battery_life_h": battery_life_h(capacity_mah, profile),
    }
