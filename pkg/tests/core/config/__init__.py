# Tests pour le module config
