"""
Tests pour les services.
"""
