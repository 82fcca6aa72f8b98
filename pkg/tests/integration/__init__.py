# Tests d'intégration
