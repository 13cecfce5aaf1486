"""Wave front tracking for a gas / near-incompressible liquid slab."""

__version__ = "0.1.0"
