"""Command-line commands of qmemsim, one package per command."""
