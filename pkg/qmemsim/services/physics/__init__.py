"""Physics of the measured memristor circuit: dynamics, noise, integrators and ensembles."""
