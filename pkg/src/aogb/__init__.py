"""Groebner-basis cryptanalysis of arithmetization-oriented ciphers over prime fields."""

__version__ = "0.1.0"
