# Command line surface: stats, tspec, simulate, sweep, gen, profiles
