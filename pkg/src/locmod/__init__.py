"""Mod-p Hecke spectra at squarefree levels, local Galois masses and the Poisson models they predict."""

__version__ = "0.1.0"
