"""Physical constants (CODATA 2018) and particle masses used by the figures."""

HBAR = 1.054571817e-34  # J s
MEV_C2_IN_KG = 1.78266192e-30  # kg per MeV/c^2
STANDARD_GRAVITY = 9.80665  # m / s^2
ANGSTROM = 1e-10  # m

# MeV/c^2
PION_NEUTRAL_MEV = 134.98
PION_CHARGED_MEV = 139.57
KAON_NEUTRAL_MEV = 497.67


def mev_to_kg(mass_mev):
    return mass_mev * MEV_C2_IN_KG


def mu_from_mass(mass_kg, hbar=HBAR):
    """Return ``m / hbar``, the only combination in which mass enters."""
    return mass_kg / hbar
