# Tests pour le module simulation
