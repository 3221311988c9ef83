"""Parameter input and run-directory output."""
