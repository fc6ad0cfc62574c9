pub mod lp;
pub mod mlp_ref;
pub mod oracle;
pub mod qp;
