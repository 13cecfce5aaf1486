"""Rendering of machzero CSV output.  The plots never recompute physics;
they only draw the columns they are given."""

__version__ = "0.1.0"
