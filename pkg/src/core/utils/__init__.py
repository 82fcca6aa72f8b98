# Utilitaires transverses : chemins et conteneurs de checkpoints
