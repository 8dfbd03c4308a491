"""Run bookkeeping for the command line and the acceptance sweep."""
