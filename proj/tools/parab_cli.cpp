// Placeholder main; the full CLI is wired up once the solver stack is in place.
int main() { return 0; }
