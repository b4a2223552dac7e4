# Sweep package (parameter grids, stable-state detection, bifurcations)
