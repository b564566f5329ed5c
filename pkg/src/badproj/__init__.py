"""Good/bad subspaces of symmetric matrices: projected PSD cones, exact and numeric tools."""

__version__ = "0.1.0"
