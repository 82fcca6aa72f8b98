# Tests pour le module postprocess
