# Tests pour le module utils
