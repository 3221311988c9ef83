# Tau optimization command package
