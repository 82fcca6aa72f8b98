# Tests pour le module coarse
