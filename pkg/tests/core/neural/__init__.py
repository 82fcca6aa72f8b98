# Tests pour le module neural
