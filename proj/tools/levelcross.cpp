#include "levelcross/app.hpp"

int main(int argc, char** argv) { return levelcross::app::run(argc, argv); }
