# topkvote package
