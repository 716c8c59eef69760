# Traffic module initialization
