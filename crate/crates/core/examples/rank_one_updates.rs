//! Grow and shrink an eigendecomposition one row at a time and compare with
//! a dense solve.

use spectral_appraise::eigen::SpectralState;
use spectral_appraise::linalg::dense_eigen_oracle;

fn main() -> spectral_appraise::Result<()> {
    let rows = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 2.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0], // in the span of the first two
        [0.0, 0.0, 3.0, 1.0],
        [1.0, 0.0, 0.0, 0.0], // exact duplicate
    ];
    let mut state = SpectralState::new(4);
    for r in &rows {
        let (predicted, _) = state.eigenvalues_after_rank_one(r, 1.0)?;
        state.commit_rank_one(r, 1.0)?;
        assert_eq!(predicted.len(), state.rank());
        println!(
            "+ {:?}: rank {} eigenvalues {:?}",
            r,
            state.rank(),
            state.eigvals()
        );
    }
    let dense = dense_eigen_oracle(&state.reconstruct(), 4);
    println!("dense solve:        {dense:?}");

    state.commit_rank_one(&rows[3], -1.0)?;
    println!(
        "- {:?}: rank {} eigenvalues {:?}",
        rows[3],
        state.rank(),
        state.eigvals()
    );
    println!("orthogonality drift {:.2e}", state.orthogonality_drift());
    Ok(())
}
