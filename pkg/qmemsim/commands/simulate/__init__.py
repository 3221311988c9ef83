# Simulate command package
