# the oriented 3-cycle
signature E/2
universe 0 1 2
rel E = (0,1) (1,2) (2,0)
