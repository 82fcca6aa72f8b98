# Tests pour le module training
