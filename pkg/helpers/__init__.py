# Helpers module initialization