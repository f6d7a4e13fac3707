#ifndef FSARD_CONFIG_HPP
#define FSARD_CONFIG_HPP

#include <stdexcept>
#include <string>

namespace fsard {

// Raised when a parameter combination makes the renewal chain degenerate
// (gamma * p_s == 0), as opposed to a plain out-of-domain argument.
class degenerate_config_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameter tuple of the reservation protocol: N users, frames of M slots
// (1 reservation slot with V mini-slots + M-1 data slots), per-slot arrival
// probability rho, per-frame reservation probability gamma.
struct SystemConfig {
    int num_users = 1;          // N >= 1
    int frame_size = 2;         // M >= 2
    int mini_slots = 1;         // V >= 1
    double arrival_prob = 0.5;  // rho in (0,1]
    double reservation_prob = 1.0;  // gamma in (0,1]

    void validate() const {
        if (num_users < 1)
            throw std::domain_error("num_users must be >= 1, got " + std::to_string(num_users));
        if (frame_size < 2)
            throw std::domain_error("frame_size must be >= 2, got " + std::to_string(frame_size));
        if (mini_slots < 1)
            throw std::domain_error("mini_slots must be >= 1, got " + std::to_string(mini_slots));
        if (!(arrival_prob > 0.0) || arrival_prob > 1.0)
            throw std::domain_error("arrival_prob must be in (0,1], got " + std::to_string(arrival_prob));
        if (!(reservation_prob > 0.0) || reservation_prob > 1.0)
            throw std::domain_error("reservation_prob must be in (0,1], got " + std::to_string(reservation_prob));
    }
};

}  // namespace fsard

#endif  // FSARD_CONFIG_HPP
