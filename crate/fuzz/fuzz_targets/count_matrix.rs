#![no_main]

use emt_core::io::parse_count_matrix;
use emt_core::magnitude::category_magnitude;
use emt_core::SimilarityMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((labels, counts)) = parse_count_matrix(text) else { return };
    if labels.len() > 6 {
        return;
    }
    if let Ok(z) = SimilarityMatrix::from_counts(labels, &counts) {
        let _ = category_magnitude(&z);
    }
});
