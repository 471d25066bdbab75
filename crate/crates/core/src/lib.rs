#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod firstorder;
pub mod linode;
pub mod numeric;
pub mod polyroots;
pub mod specfun;
pub mod variational;
