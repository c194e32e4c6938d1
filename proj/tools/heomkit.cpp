// placeholder; CLI is wired up once the engine modules are in place
int main() { return 0; }
