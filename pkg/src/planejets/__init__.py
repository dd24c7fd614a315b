"""Jet schemes of plane branches: semigroup data, fiber components, component trees."""

__version__ = "0.1.0"
