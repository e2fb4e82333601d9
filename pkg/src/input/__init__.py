# Geometry file input module
