pub mod metric_oracle;
pub mod prox_oracle;
