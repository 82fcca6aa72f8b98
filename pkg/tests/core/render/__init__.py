# Tests pour le module render
