# Cœur du pipeline : domaine, simulation, rendu neuronal, entraînement
