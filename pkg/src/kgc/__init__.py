"""Finite-scale engine for T-subgroups, liftable cohomology and the transfer condition."""

SCHEMA_VERSION = "1.0"
