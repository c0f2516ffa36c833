//! Plain federated averaging on the synthetic regression task, without
//! any cryptography.

use gsfl::fedlearn::{self, ModelParams, DEFAULT_ETA};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let task = fedlearn::make_synthetic(7, 10, 5, 20)?;
    let mut model = ModelParams::zeros(5);
    let mut history = vec![(0, fedlearn::pooled_loss(&model, &task.datasets)?)];
    for it in 1..=30 {
        let updates = task
            .datasets
            .iter()
            .map(|d| fedlearn::local_step(&model, d, DEFAULT_ETA))
            .collect::<Result<Vec<_>, _>>()?;
        model = fedlearn::aggregate(&updates)?;
        history.push((it, fedlearn::pooled_loss(&model, &task.datasets)?));
    }
    fedlearn::write_loss_csv(&history, std::io::stdout())?;
    println!("truth:  {:.3?}", task.truth);
    println!("learnt: {:.3?}", model.weights);
    Ok(())
}
