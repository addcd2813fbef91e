namespace eqlab {}
