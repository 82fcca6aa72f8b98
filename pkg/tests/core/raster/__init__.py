# Tests pour le module raster
