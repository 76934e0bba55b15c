#ifndef MORPHIN_VERSION_HPP
#define MORPHIN_VERSION_HPP

#define MORPHIN_VERSION "0.1.0"

#endif  // MORPHIN_VERSION_HPP
