# Tests pour le module garment
