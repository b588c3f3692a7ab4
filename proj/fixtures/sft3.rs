# two binary relations over {a,b,c}; c folds to b, b folds to a
signature R1/2 R2/2
universe a b c
rel R1 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,b)
rel R2 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,a)
