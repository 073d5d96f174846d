"""Weight-2 modular symbols for Gamma_0(N) over F_p."""
