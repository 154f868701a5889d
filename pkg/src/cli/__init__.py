"""Command-line front end for kmjack."""
