# Classical command package
