# a single looped point
signature E/2
universe e
rel E = (e,e)
