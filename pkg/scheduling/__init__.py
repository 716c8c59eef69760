# Scheduling module initialization
