"""Homology and cohomology rings of polyhedral products and joins, with Alexander duality."""
