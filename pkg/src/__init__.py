# vacmod package
