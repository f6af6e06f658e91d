"""Desk-scale toolkit for the synchronization phase of a two-pass fiber
QKD link: link budget, Geiger-mode detector statistics, interval-scan
detection probabilities, and a fiber-tap attacker model."""

__version__ = "0.1.0"
