# Clifford modules and matrix geometries
