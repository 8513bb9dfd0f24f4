pub mod exactparams;
pub mod cli;
pub mod experiments;
pub mod functionals;
pub mod kernels;
pub mod profiles;
pub mod quadrature;
