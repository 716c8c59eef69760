# Tests module initialization