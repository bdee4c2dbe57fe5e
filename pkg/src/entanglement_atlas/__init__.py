"""Entanglement atlas: GL2(Z/nZ) groups, modular curves and Siegel units."""
