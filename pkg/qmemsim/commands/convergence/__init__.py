# Convergence command package
